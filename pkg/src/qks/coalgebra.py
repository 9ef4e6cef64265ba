"""N-site tensor-product space and collective (coproduct) operators.

Lifts single-site generators to the full product space and materializes
the undeformed and deformed N-fold coproducts.  Tensor factors are
ordered with site 0 leftmost (sites are 0-based throughout the library);
in the deformed coproduct, the term raising/lowering site i carries
q^{-L_z/2} dressings on sites before i and q^{+L_z/2} on sites after i.

All dressing factors are entrywise exponentials of the (diagonal)
z operators, never general matrix exponentials.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .qarith import q_number
from .representations import check_half_integer, m_values, su2_generators, suq2_generators

DEFAULT_SIZE_CAP = 8192


class SizeCapError(ValueError):
    """Raised when a dense-matrix path would exceed the size cap."""


def size_cap():
    """Active dense-matrix dimension cap (env QKS_SIZE_CAP overrides)."""
    raw = os.environ.get("QKS_SIZE_CAP")
    return int(raw) if raw else DEFAULT_SIZE_CAP


@dataclass(frozen=True)
class SiteLayout:
    """Immutable description of the N-site tensor factorization."""

    spins: tuple
    dims: tuple = field(init=False)
    total_dim: int = field(init=False)

    def __post_init__(self):
        spins = tuple(check_half_integer(j) for j in self.spins)
        if not spins:
            raise ValueError("layout needs at least one site")
        dims = tuple(int(round(2 * j)) + 1 for j in spins)
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "total_dim", int(np.prod(dims, dtype=object)))

    @classmethod
    def uniform(cls, N, j):
        if N < 1 or N != int(N):
            raise ValueError(f"N must be a positive integer, got {N}")
        return cls(spins=(check_half_integer(j),) * int(N))

    @property
    def N(self):
        return len(self.spins)

    def check_cap(self, cap=None):
        cap = size_cap() if cap is None else cap
        if self.total_dim > cap:
            raise SizeCapError(
                f"total dimension {self.total_dim} exceeds the dense-matrix "
                f"cap {cap} (QKS_SIZE_CAP or --size-cap to override)")
        return self


def embed(op, site, layout):
    """Lift a single-site operator to the full product space.

    Kronecker product I x ... x op x ... x I with op acting on the given
    (0-based) site.

    Args:
        op: square matrix of dimension layout.dims[site]
        site: 0-based site index
        layout: SiteLayout

    Returns:
        total_dim x total_dim complex matrix
    """
    if not 0 <= site < layout.N:
        raise ValueError(f"site {site} out of range for N={layout.N}")
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (layout.dims[site], layout.dims[site]):
        raise ValueError(
            f"operator shape {op.shape} does not match site dimension "
            f"{layout.dims[site]}")
    left = int(np.prod(layout.dims[:site], dtype=np.int64)) if site else 1
    right = int(np.prod(layout.dims[site + 1:], dtype=np.int64)) if site + 1 < layout.N else 1
    out = op
    if left > 1:
        out = np.kron(np.eye(left, dtype=np.complex128), out)
    if right > 1:
        out = np.kron(out, np.eye(right, dtype=np.complex128))
    return out


def site_z_diagonal(site, layout):
    """Diagonal (as a vector) of the embedded L_z of one site."""
    left = int(np.prod(layout.dims[:site], dtype=np.int64)) if site else 1
    right = int(np.prod(layout.dims[site + 1:], dtype=np.int64)) if site + 1 < layout.N else 1
    return np.tile(np.repeat(m_values(layout.spins[site]), right), left)


def coproduct_z(layout):
    """Collective z operator: sum of the embedded single-site L_z.

    Identical for the deformed and undeformed algebras (the z coproduct
    carries no dressing).
    """
    diag = np.zeros(layout.total_dim, dtype=np.float64)
    for i in range(layout.N):
        diag += site_z_diagonal(i, layout)
    return np.diag(diag).astype(np.complex128)


def coproduct_pm_undeformed(layout):
    """Collective ladder operators (Delta(J_+), Delta(J_-)), plain sums.

    Returns:
        (plus, minus): conjugate-transpose pair of total_dim matrices
    """
    plus = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
    for i, j in enumerate(layout.spins):
        plus += embed(su2_generators(j).plus_op, i, layout)
    return plus, plus.conj().T.copy()


def coproduct_pm_deformed(layout, d):
    """Deformed collective ladder operators.

    Delta(L_+) = sum_i [prod_{t<i} q^{-L_z(t)/2}] L_+(i)
                       [prod_{k>i} q^{+L_z(k)/2}]
    and the conjugate-transpose partner for L_-.  Reduces to the
    undeformed coproduct at eta = 0.

    Args:
        layout: SiteLayout
        d: DeformationParam

    Returns:
        (plus, minus) pair of total_dim matrices
    """
    n = layout.N
    zdiags = [site_z_diagonal(i, layout) for i in range(n)]
    # prefix[i] = sum of z diagonals of sites < i; suffix[i] = sites > i
    total = np.sum(zdiags, axis=0)
    prefix = np.zeros(layout.total_dim)
    plus = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
    for i, j in enumerate(layout.spins):
        suffix = total - prefix - zdiags[i]
        lp = embed(suq2_generators(j, d).plus_op, i, layout)
        # diagonal dressings act as row (left factor) / column (right
        # factor) weights on the embedded ladder operator
        wl = np.exp(-d.eta / 2.0 * prefix)
        wr = np.exp(+d.eta / 2.0 * suffix)
        plus += lp * wl[:, None] * wr[None, :]
        prefix = prefix + zdiags[i]
    return plus, plus.conj().T.copy()


def q_bracket_of_diagonal(op, d):
    """Apply the q-number map entrywise to a diagonal operator.

    Args:
        op: diagonal real matrix (e.g. a collective L_z)
        d: DeformationParam

    Returns:
        diagonal matrix with entries [op_kk]_q
    """
    op = np.asarray(op)
    diag = np.diag(op)
    scale = max(1.0, float(np.max(np.abs(diag))) if diag.size else 1.0)
    if np.max(np.abs(op - np.diag(diag))) > 1e-12 * scale:
        raise ValueError("q_bracket_of_diagonal requires a diagonal matrix")
    if np.max(np.abs(diag.imag)) > 1e-12 * scale:
        raise ValueError("q_bracket_of_diagonal requires a real diagonal")
    return np.diag(q_number(diag.real, d)).astype(np.complex128)
