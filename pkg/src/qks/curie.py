"""Curie-temperature estimators for the spin-1/2 (q-)KS model.

Three routes to T_C(eta):

  * susceptibility sweep: chi(T) of the finite ferromagnet is a plateau
    that collapses sharply at the transition, so the estimator locates
    the steepest descent of log chi (coarse grid + bounded refinement);
  * equal maxima: in the bimodal regime the per-block weight
    distribution z_p develops two competing peaks, and T_C is the
    temperature where their heights coincide (bisection on the
    log-height difference, peaks re-identified each iterate);
  * closed formulas: the finite-N analytic estimate, its N -> infinity
    limit 2 sinh^2(eta/4)/(eta^2 ln 2), and the piecewise reference fit.

All numerical estimators force thermodynamic scaling (I -> I/N,
eta -> eta/N); raw scaling would make T_C drift with N.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .qarith import DeformationParam, _log_sinh, log_q_number
from .thermo import BlockModel

_GRID_POINTS = 400
_SEED_POINTS = 61
_REFINE_TOL = 1e-5
_BISECT_GTOL = 1e-9
_BISECT_TTOL = 1e-13


class NoTransitionError(ValueError):
    """chi has no interior collapse on the requested temperature range."""


class RegimeError(ValueError):
    """Weight distribution is unimodal; the equal-maxima method does not
    apply (use curie_susceptibility)."""


@dataclass(frozen=True)
class CurieEstimate:
    """One Curie-temperature estimate.

    method is one of susceptibility_peak, equal_maxima,
    analytic_formula, limit_formula, fit_reference; regime records the
    weight-distribution shape (unimodal/bimodal) where it was examined.
    diagnostics carries the solver trace (bracket, iterations,
    residual).
    """

    eta: float
    N: int
    method: str
    T_C: float
    regime: str = ""
    diagnostics: dict = None


def _require_curie_cfg(cfg):
    if cfg.scaling != "thermodynamic":
        raise ValueError(
            "Curie estimators require thermodynamic scaling "
            "(ModelConfig(scaling='thermodynamic'))")
    if cfg.uniform_spin != 0.5:
        raise ValueError("Curie estimators cover uniform spin-1/2 layouts")
    if cfg.h != 0.0:
        raise ValueError("Curie estimators work at zero field")
    return BlockModel(cfg)


def strict_maxima(values):
    """Indices of strict local maxima of a 1-D sequence.

    Endpoints count (virtual -inf sentinels); plateaus are not strict,
    so a flat top yields no index there.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 1:
        return [0]
    left = np.empty_like(v)
    right = np.empty_like(v)
    left[0], left[1:] = -np.inf, v[:-1]
    right[-1], right[:-1] = -np.inf, v[1:]
    return list(np.flatnonzero((v > left) & (v > right)))


def _weight_regime(model, T):
    _, lw = model.level_weights(T)
    return "bimodal" if len(strict_maxima(lw.log_z)) >= 2 else "unimodal"


def curie_susceptibility(cfg, T_range=(0.05, 1.5)):
    """T_C from the susceptibility collapse.

    Sweeps log chi over a 400-point grid, locates the steepest descent
    by central differences, and refines the maximizer of
    -d(log chi)/dT (finite-difference step fixed at the grid spacing)
    with a bounded scalar minimizer to 1e-5 absolute in T.

    Args:
        cfg: thermodynamic-scaling uniform spin-1/2 ModelConfig, h = 0
        T_range: (low, high) temperature interval to scan

    Returns:
        CurieEstimate with method "susceptibility_peak"

    Raises:
        NoTransitionError: steepest descent sits on the range boundary
    """
    model = _require_curie_cfg(cfg)
    lo, hi = float(T_range[0]), float(T_range[1])
    if not (0.0 < lo < hi):
        raise ValueError(f"invalid temperature range ({lo}, {hi})")
    Ts = np.linspace(lo, hi, _GRID_POINTS)
    step = Ts[1] - Ts[0]
    logchi = np.array([model.log_chi(t) for t in Ts])
    drop = -(logchi[2:] - logchi[:-2]) / (2.0 * step)
    k = int(np.argmax(drop)) + 1
    if k <= 1 or k >= _GRID_POINTS - 2:
        raise NoTransitionError(
            f"no interior susceptibility collapse in ({lo}, {hi})")

    def neg_drop(t):
        return (model.log_chi(t + step) - model.log_chi(t - step)) \
            / (2.0 * step)

    bracket = (Ts[k - 2], Ts[k + 2])
    res = minimize_scalar(neg_drop, bounds=bracket, method="bounded",
                          options={"xatol": _REFINE_TOL})
    tc = float(res.x)
    return CurieEstimate(
        eta=cfg.eta, N=cfg.N, method="susceptibility_peak", T_C=tc,
        regime=_weight_regime(model, tc),
        diagnostics={
            "grid_points": _GRID_POINTS, "grid_step": float(step),
            "bracket": (float(bracket[0]), float(bracket[1])),
            "iterations": int(res.nfev), "residual": float(-res.fun),
        })


def _two_peaks(model, T):
    """(g, first_peak_p, last_peak_p) or None when not bimodal."""
    _, lw = model.level_weights(T)
    peaks = strict_maxima(lw.log_z)
    if len(peaks) < 2:
        return None
    i, k = peaks[0], peaks[-1]
    return float(lw.log_z[k] - lw.log_z[i]), int(lw.p[i]), int(lw.p[k])


def curie_equal_maxima(cfg, T_bracket=(0.2, 1.4)):
    """T_C as the temperature where the two weight peaks coincide.

    Seeds from a coarse sweep of g(T) = log z at the high-p peak minus
    log z at the low-p peak (keeping only bimodal points), brackets the
    sign change, and bisects, re-identifying both peaks at every
    iterate.  Converges to |g| <= 1e-9, far inside the 1e-6 relative
    peak-equality the bimodal criterion asks for.

    Args:
        cfg: thermodynamic-scaling uniform spin-1/2 ModelConfig, h = 0
        T_bracket: (low, high) search interval

    Returns:
        CurieEstimate with method "equal_maxima", regime "bimodal"

    Raises:
        RegimeError: distribution unimodal across the whole bracket
        ValueError: bimodal but no sign change inside the bracket
    """
    model = _require_curie_cfg(cfg)
    lo, hi = float(T_bracket[0]), float(T_bracket[1])
    if not (0.0 < lo < hi):
        raise ValueError(f"invalid temperature bracket ({lo}, {hi})")
    seeds = []
    for t in np.linspace(lo, hi, _SEED_POINTS):
        got = _two_peaks(model, float(t))
        if got is not None:
            seeds.append((float(t), got[0]))
    if not seeds:
        raise RegimeError(
            "weight distribution is unimodal over the whole bracket; "
            "use curie_susceptibility")
    pair = next(((a, b) for a, b in zip(seeds, seeds[1:])
                 if (a[1] < 0.0) != (b[1] < 0.0)), None)
    if pair is None:
        raise ValueError(
            f"equal-maxima crossing not bracketed by ({lo}, {hi})")
    (tlo, glo), (thi, _) = pair
    mid, gmid = tlo, glo
    got = _two_peaks(model, tlo)
    iterations = 0
    while thi - tlo > _BISECT_TTOL:
        iterations += 1
        mid = 0.5 * (tlo + thi)
        got = _two_peaks(model, mid)
        if got is None:
            raise RegimeError(
                f"distribution turned unimodal at T={mid} during "
                "bisection; use curie_susceptibility")
        gmid = got[0]
        if abs(gmid) <= _BISECT_GTOL:
            break
        if (gmid < 0.0) == (glo < 0.0):
            tlo, glo = mid, gmid
        else:
            thi = mid
    p_lo, p_hi = got[1], got[2]
    return CurieEstimate(
        eta=cfg.eta, N=cfg.N, method="equal_maxima", T_C=float(mid),
        regime="bimodal",
        diagnostics={
            "bracket": (float(pair[0][0]), float(pair[1][0])),
            "iterations": iterations, "residual": abs(float(gmid)),
            "peaks": (p_lo, p_hi),
        })


def curie_analytic(N, eta, I=1.0, k_B=1.0):
    """Finite-N closed-form Curie estimate (log-domain evaluation).

    T_C = I*[N/2+1]_q*[N/2]_q / (2 k_B N ln(N!/((N+1)(N/2)!(N/2+1)!)))
    with q = e^{eta/N}; every factorial and q-number stays in logs so
    N = 10^8 is exact to double precision.

    Args:
        N: even positive site count
        eta: deformation (unscaled; the formula applies eta/N itself)
        I: coupling (> 0)
        k_B: Boltzmann constant

    Returns:
        the estimate as a float
    """
    if N != int(N) or N < 2 or int(N) % 2:
        raise ValueError(f"the analytic formula needs even N >= 2, got {N}")
    if I <= 0:
        raise ValueError(f"ferromagnetic coupling I > 0 required, got {I}")
    N = int(N)
    d = DeformationParam(eta / N)
    half = N // 2
    log_count = (gammaln(N + 1.0) - math.log(N + 1.0)
                 - 2.0 * gammaln(half + 1.0) - math.log(half + 1.0))
    if log_count <= 0.0:
        raise ValueError(
            f"N={N} is below the formula's domain (level count <= 1)")
    log_t = (math.log(I) + log_q_number(half + 1, d) + log_q_number(half, d)
             - math.log(2.0 * k_B * N) - math.log(log_count))
    return math.exp(log_t)


def curie_limit(eta):
    """Thermodynamic-limit Curie temperature 2 sinh^2(eta/4)/(eta^2 ln 2).

    Valid as a transition estimate only for large eta; evaluated in log
    domain so arbitrarily large eta cannot overflow.

    Args:
        eta: deformation, > 0

    Returns:
        the limit value as a float
    """
    if not (eta > 0.0):
        raise ValueError(f"curie_limit requires eta > 0, got {eta}")
    log_t = (math.log(2.0) + 2.0 * float(_log_sinh(eta / 4.0))
             - 2.0 * math.log(eta) - math.log(math.log(2.0)))
    return math.exp(log_t)


def curie_fit_reference(eta):
    """Piecewise reference fit of T_C(eta) on [0, 8].

    Constant 0.25 up to eta = 3, then a degree-5 polynomial; used only
    as a regression reference for the numerical estimators.

    Args:
        eta: deformation in [0, 8]

    Returns:
        the fit value as a float
    """
    if not (0.0 <= eta <= 8.0):
        raise ValueError(f"fit reference covers eta in [0, 8], got {eta}")
    if eta <= 3.0:
        return 0.25
    coeffs = (0.25, 0.022959, -0.023077, 0.007164, -0.000779, 0.000035)
    out = 0.0
    for c in reversed(coeffs):
        out = out * eta + c
    return out
