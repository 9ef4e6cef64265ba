"""Numpy implementation of the block-reduction hot kernels.

These two functions dominate large-N thermodynamics runtime: per-block
Zeeman factors/moments and the fused log-domain partition reduction.
The compiled extension (_kernels) implements identical signatures with
fused C loops; this module is the always-available fallback and the
reference the extension is cross-tested against.
"""

import math

import numpy as np

from .qarith import _log_sinh

# below a*|x| = 0.01 the hyperbolic forms lose ~4 digits to cancellation
# and the degree-5 Taylor remainder is ~1e-22 relative, so the crossover
# keeps worst-case error near 3e-12
_SERIES_CUT = 0.01


def zeeman_block_terms(J, x):
    """Per-block Zeeman log-factor and projection moments.

    For a spin-J block in reduced field x = beta*gamma*h, with
    a = J + 1/2:

        logzee = log sum_{m=-J..J} e^{x m} = logsinh(a x) - logsinh(x/2)
        m1     = <m>   = a coth(a x) - (1/2) coth(x/2)
        m2     = <m^2> = dm1/dx + m1^2

    Blocks with a|x| < 0.01 use the Taylor series of log(sinh(ax)/
    sinh(x/2)) instead, which evaluates the differences without the
    catastrophic subtraction (and covers x = 0 exactly: m1 = 0,
    m2 = J(J+1)/3).

    Args:
        J: array of block spins
        x: scalar reduced field

    Returns:
        (logzee, m1, m2) float arrays shaped like J
    """
    J = np.asarray(J, dtype=np.float64)
    a = J + 0.5
    sign = 1.0 if x >= 0.0 else -1.0
    ax = abs(float(x))
    y = a * ax
    logzee = np.empty_like(a)
    m1 = np.empty_like(a)
    m2 = np.empty_like(a)

    small = y < _SERIES_CUT
    if np.any(small):
        asq = a[small] * a[small]
        b2 = asq - 0.25
        b4 = asq * asq - 0.0625
        b6 = asq * asq * asq - 0.015625
        x2 = ax * ax
        logzee[small] = np.log(2.0 * a[small]) + x2 * (
            b2 / 6.0 - x2 * (b4 / 180.0 - x2 * b6 / 2835.0))
        m1s = ax * (b2 / 3.0 - x2 * (b4 / 45.0 - x2 * b6 * (2.0 / 945.0)))
        lpp = b2 / 3.0 - x2 * (b4 / 15.0 - x2 * b6 * (2.0 / 189.0))
        m1[small] = m1s
        m2[small] = lpp + m1s * m1s

    big = ~small
    if np.any(big):
        ab = a[big]
        em = np.expm1(-2.0 * y[big])
        coth_a = -(2.0 + em) / em
        csch2_a = 4.0 * (1.0 + em) / (em * em)
        emh = math.expm1(-ax)
        coth_h = -(2.0 + emh) / emh
        csch2_h = 4.0 * (1.0 + emh) / (emh * emh)
        logzee[big] = _log_sinh(y[big]) - float(_log_sinh(0.5 * ax))
        m1b = ab * coth_a - 0.5 * coth_h
        m1[big] = m1b
        m2[big] = -ab * ab * csch2_a + 0.25 * csch2_h + m1b * m1b

    m1 *= sign
    return logzee, m1, m2


def block_reduce(logd, E, J, beta, x):
    """Log-domain partition sum and weighted moments over all blocks.

    Block weights w_J = exp(log d_J + logzee_J - beta*E_J) are handled
    max-shifted so no intermediate overflows; the returned moments are
    weight averages.

    Args:
        logd: log block multiplicities
        E: corrected block energies
        J: block spins
        beta: inverse temperature (> 0)
        x: reduced field beta*gamma*h

    Returns:
        (logZ, E_mean, E2_mean, m_mean, m2_mean, Em_mean): log partition
        sum, then <E'>, <E'^2>, <m>, <m^2>, <E' m>
    """
    logd = np.asarray(logd, dtype=np.float64)
    E = np.asarray(E, dtype=np.float64)
    logzee, m1, m2 = zeeman_block_terms(J, x)
    logw = logd + logzee - beta * E
    shift = float(np.max(logw))
    w = np.exp(logw - shift)
    s0 = float(np.sum(w))
    logz = shift + math.log(s0)
    e_mean = float(w @ E) / s0
    e2_mean = float(w @ (E * E)) / s0
    m_mean = float(w @ m1) / s0
    m2_mean = float(w @ m2) / s0
    em_mean = float(w @ (E * m1)) / s0
    return logz, e_mean, e2_mean, m_mean, m2_mean, em_mean
