"""Single-site spin-j matrix representations.

Builds the ladder/z generators of su(2) and of its q-deformation
U_q(su(2)) in the (2j+1)-dimensional irreducible representation, the
deforming-functional route from one to the other, and the (q-)Casimir.

Basis convention: states ordered by descending magnetic quantum number,
m = j, j-1, ..., -j, so z_op = diag(j, ..., -j) and the raising operator
has its nonzero entries on the superdiagonal.
"""

from dataclasses import dataclass

import numpy as np

from .qarith import UNDEFORMED, DeformationParam, q_number


@dataclass(frozen=True)
class SpinRep:
    """Matrix representation of one spin-j site.

    minus_op is the conjugate transpose of plus_op; z_op is real
    diagonal with entries j..-j (descending-m basis).
    """

    j: float
    dim: int
    plus_op: np.ndarray
    minus_op: np.ndarray
    z_op: np.ndarray
    deformation: DeformationParam


def check_half_integer(j, name="j"):
    """Validate that j is a nonnegative half-integer; returns it as float."""
    j = float(j)
    if j < 0 or (2 * j) != int(round(2 * j)):
        raise ValueError(f"{name} must be a nonnegative half-integer, got {j}")
    return j


def m_values(j):
    """Magnetic quantum numbers in basis order: j, j-1, ..., -j."""
    j = check_half_integer(j)
    return j - np.arange(int(round(2 * j)) + 1, dtype=np.float64)


def _ladder_rep(j, d, raise_amp):
    """Assemble a SpinRep from the amplitude function m -> <m+1|L_+|m>."""
    j = check_half_integer(j)
    dim = int(round(2 * j)) + 1
    mv = m_values(j)
    plus = np.zeros((dim, dim), dtype=np.complex128)
    # raising |j,m> -> |j,m+1> moves one row up in the descending-m basis
    for k in range(1, dim):
        plus[k - 1, k] = raise_amp(mv[k])
    minus = plus.conj().T.copy()
    z = np.diag(mv).astype(np.complex128)
    return SpinRep(j=j, dim=dim, plus_op=plus, minus_op=minus, z_op=z, deformation=d)


def su2_generators(j):
    """Undeformed generators: <m+1|J_+|m> = sqrt((j-m)(j+m+1)).

    Args:
        j: nonnegative half-integer spin

    Returns:
        SpinRep with J_-J_+ + J_z(J_z+1) = j(j+1)*Identity
    """
    return _ladder_rep(j, UNDEFORMED,
                       lambda m: np.sqrt((j - m) * (j + m + 1.0)))


def suq2_generators(j, d):
    """Deformed generators: <m+1|L_+|m> = sqrt([j-m]_q [j+m+1]_q).

    Reduces to su2_generators at eta = 0; for j = 1/2 the matrices are
    the undeformed Pauli realization for every eta.

    Args:
        j: nonnegative half-integer spin
        d: DeformationParam

    Returns:
        SpinRep satisfying [L_+, L_-] = [2 L_z]_q
    """
    return _ladder_rep(j, d,
                       lambda m: np.sqrt(q_number(j - m, d) * q_number(j + m + 1.0, d)))


def deforming_functional(j, d):
    """Deformed generators built from the undeformed ones.

    L_+ = J_+ * f(J_z) and L_- = f(J_z) * J_- with the diagonal
    functional f(m) = sqrt([j-m]_q [j+m+1]_q / ((j-m)(j+m+1))).
    The 0/0 entries (where j-m or j+m+1 vanishes) are defined as 0;
    those columns are annihilated by J_+/J_- anyway.

    Output equals suq2_generators(j, d) entrywise.
    """
    j = check_half_integer(j)
    base = su2_generators(j)
    mv = m_values(j)
    num = np.atleast_1d(q_number(j - mv, d) * q_number(j + mv + 1.0, d))
    den = np.atleast_1d((j - mv) * (j + mv + 1.0))
    ratio = np.zeros_like(den)
    ok = den > 0.0
    ratio[ok] = num[ok] / den[ok]
    f = np.sqrt(ratio)
    plus = base.plus_op @ np.diag(f)
    minus = plus.conj().T.copy()
    return SpinRep(j=j, dim=base.dim, plus_op=plus, minus_op=minus,
                   z_op=base.z_op, deformation=d)


def q_casimir_matrix(rep):
    """(q-)Casimir L_-L_+ + [L_z]_q [L_z+1]_q of a SpinRep.

    Equals the alternative factorization L_+L_- + [L_z]_q [L_z-1]_q and,
    on an irrep, [j]_q [j+1]_q * Identity.  At eta = 0 this is the
    ordinary Casimir J_-J_+ + J_z(J_z+1) = j(j+1)*Identity.
    """
    d = rep.deformation
    mv = np.real(np.diag(rep.z_op))
    diag = q_number(mv, d) * q_number(mv + 1.0, d)
    return rep.minus_op @ rep.plus_op + np.diag(diag).astype(np.complex128)
