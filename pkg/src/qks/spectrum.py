"""Analytic spectrum of the (q-)Kittel-Shore model.

The complete-graph coupling makes the Hamiltonian a function of the
collective Casimir and L_z alone, so the full spectrum is labeled by
the total spin J and the Zeeman label m:

    E(J, m) = -(I/2)([J]_q [J+1]_q - K_q) - gamma*h*m

with combinatorial multiplicity d(J) counting how often the spin-J
block appears in the N-fold tensor power.  Multiplicities come from
weight-space counting; three independent routes (exact convolution,
alternating binomial sum, spin-1/2 closed form) must agree, and a
log-domain variant covers N beyond exact-integer practicality.

A dense-diagonalization oracle verifies the analytic multiset for
systems small enough to assemble.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp

from .hamiltonian import casimir_constant
from .qarith import q_number
from .representations import check_half_integer

# exact-integer convolution tables get impractical past a few thousand
# levels; the log-domain route takes over well before this matters
_DP_MAX_N = 2000

# the spin-1/2 closed form stays exact at any N, but its big integers
# grow to thousands of digits; past this bound the incremental pass
# still costs seconds and the log-domain route is the right tool
_HALF_EXACT_MAX_N = 20000


@dataclass(frozen=True)
class SpectrumLine:
    """One degenerate level of the analytic spectrum.

    d is the block multiplicity (exact integer).  m is the Zeeman label,
    present only when a field splits the block; at h = 0 a line stands
    for the whole (2J+1)-fold block and its statistical weight is
    d*(2J+1), otherwise d.
    """

    J: float
    d: int
    E: float
    E_corr: float
    m: float = None

    @property
    def weight(self):
        return self.d if self.m is not None else self.d * int(round(2 * self.J + 1))


@dataclass(frozen=True)
class Histogram:
    """Density-of-states histogram: uniform bins over corrected energy.

    weights are per-bin total degeneracies, or their logs when
    log_scale is set (empty bins then carry -inf).
    """

    edges: np.ndarray
    weights: np.ndarray
    log_scale: bool = False


def _normalize_spins(spins):
    return tuple(sorted(check_half_integer(j) for j in spins))


@lru_cache(maxsize=64)
def _omega_table(spins):
    """Weight-space dimensions by exact integer convolution.

    Returns a tuple c with c[s] = number of product states of total
    z-projection m = s - J_max, s = 0..2*J_max (integer steps).  Each
    site convolves an all-ones vector of length 2j+1; the sliding
    window runs on Python ints so the result is exact at any size.
    """
    counts = [1]
    for j in spins:
        width = int(round(2 * j)) + 1
        if width == 1:
            continue
        prefix = [0]
        for c in counts:
            prefix.append(prefix[-1] + c)
        n = len(counts) + width - 1
        counts = [
            prefix[min(s + 1, len(counts))] - prefix[max(s - width + 1, 0)]
            for s in range(n)
        ]
    return tuple(counts)


def _omega_from_table(table, J, j_total):
    """Omega(J) = weight multiplicity of m = J, from a DP table."""
    s = int(round(j_total - J))
    idx = len(table) - 1 - s
    if idx < 0 or idx >= len(table):
        return 0
    return table[idx]


def _omega_alternating(J, N, j):
    """Omega(J, N, j) by the alternating binomial sum.

    Counts compositions of Nj + J into N parts each at most 2j via
    inclusion-exclusion; the floor-function upper limit drops the terms
    whose second binomial would have a negative argument.
    """
    s = int(round(N * j + J))
    width = int(round(2 * j)) + 1
    total = 0
    for k in range(min(N, s // width) + 1):
        rem = s - width * k
        term = math.comb(N, k) * math.comb(rem + N - 1, N - 1)
        total = total + term if k % 2 == 0 else total - term
    return total


def _multiplicity_half_closed(J, N):
    """Spin-1/2 closed form: C(N, N/2-J) - C(N, N/2-J-1)."""
    p = int(round(N / 2 - J))
    a = math.comb(N, p)
    b = math.comb(N, p - 1) if p >= 1 else 0
    return a - b


def _check_multiplicity_args(J, N, j):
    if N != int(N) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    j = check_half_integer(j, "j")
    J = check_half_integer(J, "J")
    if J < 0 or J > N * j:
        raise ValueError(f"J={J} outside [0, N*j={N * j}]")
    steps = 2 * (N * j - J)
    if abs(steps - round(steps)) > 1e-9 or round(steps) % 2 != 0:
        raise ValueError(f"J={J} and N*j={N * j} differ by a non-integer")
    return J, int(N), j


def multiplicity(J, N, j=0.5):
    """Multiplicity d of the spin-J block in N coupled spin-j sites.

    d = Omega(J) - Omega(J+1), with Omega the weight-space dimension.
    Evaluated by exact convolution and independently by the alternating
    binomial sum (plus the closed form for j = 1/2); the routes must
    agree exactly or a RuntimeError flags the internal inconsistency.

    Args:
        J: total (block) spin, half-integer
        N: number of sites
        j: common site spin, half-integer

    Returns:
        exact nonnegative integer multiplicity
    """
    J, N, j = _check_multiplicity_args(J, N, j)
    table = _omega_table((j,) * N)
    jt = N * j
    d_dp = _omega_from_table(table, J, jt) - _omega_from_table(table, J + 1, jt)
    d_alt = _omega_alternating(J, N, j)
    d_alt -= _omega_alternating(J + 1, N, j) if J + 1 <= jt else 0
    if d_dp != d_alt:
        raise RuntimeError(
            f"multiplicity routes disagree at J={J}, N={N}, j={j}: "
            f"convolution {d_dp} vs alternating sum {d_alt}")
    if j == 0.5:
        d_half = _multiplicity_half_closed(J, N)
        if d_half != d_dp:
            raise RuntimeError(
                f"spin-1/2 closed form disagrees at J={J}, N={N}: "
                f"{d_half} vs {d_dp}")
    return d_dp


def multiplicity_mixed(J, spins):
    """Multiplicity of the spin-J block for an arbitrary site list."""
    spins = _normalize_spins(spins)
    J = check_half_integer(J, "J")
    jt = sum(spins)
    if J < 0 or J > jt:
        return 0
    steps = 2 * (jt - J)
    if round(steps) % 2 != 0:
        return 0
    table = _omega_table(spins)
    return _omega_from_table(table, J, jt) - _omega_from_table(table, J + 1, jt)


def log_multiplicity_half(N, J):
    """log d for N spin-1/2 sites, vectorized and overflow-free.

    log(C(N,p) - C(N,p-1)) with p = N/2 - J, evaluated as
    la + log1p(-exp(lb - la)) so the near-total cancellation at small J
    costs only the accuracy of lb - la.

    Args:
        N: number of sites
        J: scalar or array of block spins

    Returns:
        float array (or scalar) of log multiplicities
    """
    J = np.asarray(J, dtype=np.float64)
    p = np.rint(N / 2.0 - J)
    if np.any(np.abs(N / 2.0 - J - p) > 1e-9):
        raise ValueError("J is not an integer number of steps below N/2")
    if np.any(p < 0) or np.any(p > N // 2):
        raise ValueError("J outside the spin-1/2 block range")
    la = gammaln(N + 1.0) - gammaln(p + 1.0) - gammaln(N - p + 1.0)
    pm = p - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        lb = np.where(
            pm >= 0,
            gammaln(N + 1.0) - gammaln(pm + 1.0) - gammaln(N - pm + 1.0),
            -np.inf,
        )
        out = la + np.log1p(-np.exp(lb - la))
    out = np.where(np.isneginf(lb), la, out)
    return out if out.ndim else float(out)


def block_spins(cfg):
    """Total-spin values J with nonzero multiplicity, descending.

    For a uniform layout this is J_max, J_max-1, ..., delta with
    delta = 0 (integer total) or 1/2; mixed layouts drop any leading
    zero-multiplicity values via the exact table.
    """
    jt = sum(cfg.spins)
    n_steps = int(round(jt - (jt - math.floor(jt))))
    values = [jt - k for k in range(n_steps + 1)]
    if cfg.uniform_spin is None:
        values = [J for J in values if multiplicity_mixed(J, cfg.spins) > 0]
    elif cfg.N == 1:
        values = [jt]
    return values


def block_energy(cfg, J):
    """Raw block energy E(J) = -(I/2)([J]_q[J+1]_q - K_q)."""
    d = cfg.deformation
    J = np.asarray(J, dtype=np.float64)
    cas = q_number(J, d) * q_number(J + 1.0, d)
    out = -(cfg.I_eff / 2.0) * (cas - casimir_constant(cfg))
    return out if np.ndim(out) else float(out)


def ground_energy(cfg):
    """Minimum raw energy over all blocks and Zeeman lines.

    At h = 0 this is the scanned minimum of E(J); a field lowers each
    block by |gamma*h|*J on its extremal Zeeman line.
    """
    J = np.asarray(block_spins(cfg), dtype=np.float64)
    E = block_energy(cfg, J) - abs(cfg.gamma * cfg.h) * J
    return float(np.min(E))


def analytic_levels(cfg):
    """Complete analytic spectrum as SpectrumLine records.

    One line per block J at h = 0 (weight d*(2J+1)); with a field each
    block splits into 2J+1 Zeeman lines of weight d.  E_corr subtracts
    the true minimum over every line.  Exact integer multiplicities:
    the spin-1/2 closed form (incremental, to N = 20000), the
    convolution table otherwise (practical to N ~ 2000); past those
    bounds the log-domain route (half_spin_block_arrays,
    density_of_states_log) is the right tool.

    Args:
        cfg: ModelConfig

    Returns:
        list of SpectrumLine, blocks in descending J, m descending
        within a block
    """
    # scalar pre-check before any O(N) work: every exact route is
    # impractical past this bound and the rejection should be immediate
    if cfg.N > _HALF_EXACT_MAX_N:
        raise ValueError(
            f"exact integer multiplicities impractical for N={cfg.N}; "
            "use the log-domain route (half_spin_block_arrays, "
            "density_of_states_log)")
    Js = block_spins(cfg)
    uniform = cfg.uniform_spin
    if uniform == 0.5:
        # one incremental pass: C(N, p) = C(N, p-1)*(N-p+1)/p with
        # p = N/2 - J ascending, d = C(N, p) - C(N, p-1)
        ds = []
        c_prev, c = 0, 1
        for p in range(len(Js)):
            if p:
                c_prev, c = c, c * (cfg.N - p + 1) // p
            ds.append(c - c_prev)
    elif uniform is not None:
        if cfg.N > _DP_MAX_N:
            raise ValueError(
                f"exact multiplicities impractical for N={cfg.N} at spin "
                f"{uniform}; spin-1/2 or the log-domain route required")
        table = _omega_table((uniform,) * cfg.N)
        jt = cfg.N * uniform
        ds = [_omega_from_table(table, J, jt) - _omega_from_table(table, J + 1, jt)
              for J in Js]
    else:
        if cfg.N > _DP_MAX_N:
            raise ValueError(
                f"exact multiplicities impractical for N={cfg.N} with "
                "mixed spins")
        ds = [multiplicity_mixed(J, cfg.spins) for J in Js]
    E0 = ground_energy(cfg)
    gh = cfg.gamma * cfg.h
    lines = []
    for J, d in zip(Js, ds):
        E = block_energy(cfg, J)
        if cfg.h == 0.0:
            lines.append(SpectrumLine(J=J, d=d, E=E, E_corr=E - E0))
        else:
            for k in range(int(round(2 * J)) + 1):
                m = J - k
                Em = E - gh * m
                lines.append(SpectrumLine(J=J, d=d, E=Em, E_corr=Em - E0, m=m))
    return lines


def total_dimension(lines):
    """Sum of line weights (exact integer); equals the product of site
    dimensions when the lines cover the full spectrum."""
    return sum(line.weight for line in lines)


def half_spin_block_arrays(N, d, I):
    """Vectorized block data for N uniform spin-1/2 sites.

    The workhorse of the large-N thermodynamics: log-domain
    multiplicities and raw block energies for every J, with no
    matrices and no exact integers.

    Args:
        N: number of sites
        d: DeformationParam (already scaled if applicable)
        I: coupling (already scaled if applicable)

    Returns:
        (J, logd, E): ascending J array from delta to N/2, log
        multiplicities, raw block energies
    """
    if N != int(N) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    N = int(N)
    delta = 0.0 if N % 2 == 0 else 0.5
    J = np.arange(delta, N / 2.0 + 0.5, 1.0)
    logd = log_multiplicity_half(N, J)
    K = N * q_number(0.5, d) * q_number(1.5, d)
    E = -(I / 2.0) * (q_number(J, d) * q_number(J + 1.0, d) - K)
    return J, logd, E


def corrected_energies(E):
    """Shift raw energies so the scanned minimum sits at zero."""
    E = np.asarray(E, dtype=np.float64)
    return E - float(np.min(E))


def density_of_states(lines, bins):
    """Histogram of corrected energies weighted by degeneracy.

    Args:
        lines: SpectrumLine list (exact weights)
        bins: number of uniform bins (>= 1)

    Returns:
        Histogram over [min E_corr, max E_corr]; a single distinct
        energy widens to a unit interval so the histogram is well posed
    """
    if not lines:
        raise ValueError("density_of_states needs at least one line")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    E = np.array([line.E_corr for line in lines], dtype=np.float64)
    try:
        w = np.array([float(line.weight) for line in lines], dtype=np.float64)
    except OverflowError:
        raise ValueError(
            "degeneracies overflow double precision; use the log-domain "
            "route (density_of_states_log)") from None
    lo, hi = float(E.min()), float(E.max())
    if hi <= lo:
        hi = lo + 1.0
    weights, edges = np.histogram(E, bins=bins, range=(lo, hi), weights=w)
    return Histogram(edges=edges, weights=weights)


def density_of_states_log(cfg, bins):
    """Log-weight density of states for large spin-1/2 systems.

    Bins log(d*(2J+1)) by per-bin logsumexp, so N far beyond exact
    integer range (10^4 and up) is routine.

    Args:
        cfg: uniform spin-1/2 ModelConfig with h = 0
        bins: number of uniform bins

    Returns:
        Histogram with log_scale=True; empty bins hold -inf
    """
    if cfg.uniform_spin != 0.5:
        raise ValueError("log-domain density of states requires spin 1/2")
    if cfg.h != 0.0:
        raise ValueError("log-domain density of states requires h = 0")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    J, logd, E = half_spin_block_arrays(cfg.N, cfg.deformation, cfg.I_eff)
    Ec = corrected_energies(E)
    logw = logd + np.log(2.0 * J + 1.0)
    lo, hi = float(Ec.min()), float(Ec.max())
    if hi <= lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.minimum(np.searchsorted(edges, Ec, side="right") - 1, bins - 1)
    out = np.full(bins, -np.inf)
    for b in np.unique(idx):
        out[b] = logsumexp(logw[idx == b])
    return Histogram(edges=edges, weights=out, log_scale=True)


def diagonalize_oracle(H):
    """Dense Hermitian eigendecomposition with residual verification.

    Args:
        H: square Hermitian matrix (asymmetry beyond 1e-10 of its
           magnitude rejected)

    Returns:
        ascending real eigenvalues

    Raises:
        ValueError: non-Hermitian input
        RuntimeError: an eigenpair residual exceeds 1e-9 * ||H||
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 0.0)
    asym = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if asym > 1e-10 * scale:
        raise ValueError(f"matrix is not Hermitian: asymmetry {asym:.3e}")
    w, v = np.linalg.eigh(H)
    norm = max(float(np.max(np.abs(w))) if w.size else 0.0, 1e-300)
    res = np.linalg.norm(H @ v - v * w[None, :], axis=0)
    worst = float(np.max(res)) if res.size else 0.0
    if worst > 1e-9 * norm:
        raise RuntimeError(
            f"eigenpair residual {worst:.3e} exceeds 1e-9 * ||H|| = "
            f"{1e-9 * norm:.3e}")
    return w
