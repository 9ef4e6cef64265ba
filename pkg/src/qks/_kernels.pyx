# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled implementation of the block-reduction hot kernels.

Same contract as _kernels_py (the numpy reference): per-block Zeeman
factors/moments and the fused log-domain partition reduction.  The
loops here fuse the Zeeman evaluation, the max-shift scan, and the
moment accumulation, avoiding the intermediate arrays of the numpy
route; accumulation order is fixed (ascending block index) so results
are bit-stable across runs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, expm1, fabs, log

cnp.import_array()

cdef double _LN2 = 0.6931471805599453
cdef double _SERIES_CUT = 0.01


cdef inline double _log_sinh(double x) noexcept nogil:
    # ln sinh x = x - ln 2 + ln(-expm1(-2x)), exact for all x > 0
    return x - _LN2 + log(-expm1(-2.0 * x))


cdef inline void _zeeman_one(double a, double ax, double lsh, double coth_h,
                             double csch2_h, double* lz, double* m1,
                             double* m2) noexcept nogil:
    # one block at |x| = ax; lsh/coth_h/csch2_h are the shared x/2 legs
    cdef double y = a * ax
    cdef double a2, b2, b4, b6, x2, m1s, lpp, em, coth_a, csch2_a
    if y < _SERIES_CUT:
        a2 = a * a
        b2 = a2 - 0.25
        b4 = a2 * a2 - 0.0625
        b6 = a2 * a2 * a2 - 0.015625
        x2 = ax * ax
        lz[0] = log(2.0 * a) + x2 * (b2 / 6.0 - x2 * (b4 / 180.0
                                                      - x2 * b6 / 2835.0))
        m1s = ax * (b2 / 3.0 - x2 * (b4 / 45.0 - x2 * b6 * (2.0 / 945.0)))
        lpp = b2 / 3.0 - x2 * (b4 / 15.0 - x2 * b6 * (2.0 / 189.0))
    else:
        em = expm1(-2.0 * y)
        coth_a = -(2.0 + em) / em
        csch2_a = 4.0 * (1.0 + em) / (em * em)
        lz[0] = _log_sinh(y) - lsh
        m1s = a * coth_a - 0.5 * coth_h
        lpp = -a * a * csch2_a + 0.25 * csch2_h
    m1[0] = m1s
    m2[0] = lpp + m1s * m1s


def zeeman_block_terms(J, double x):
    """Per-block Zeeman log-factor and projection moments.

    Compiled twin of _kernels_py.zeeman_block_terms; see there for the
    formulas and the series-crossover rationale.

    Args:
        J: array of block spins
        x: scalar reduced field beta*gamma*h

    Returns:
        (logzee, m1, m2) float arrays shaped like J
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Ja = np.ascontiguousarray(
        J, dtype=np.float64)
    cdef Py_ssize_t n = Ja.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lz = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m1 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m2 = np.empty(n)
    cdef double sign = 1.0 if x >= 0.0 else -1.0
    cdef double ax = fabs(x)
    cdef double lsh = 0.0, coth_h = 0.0, csch2_h = 0.0, emh
    cdef Py_ssize_t i
    if ax > 0.0:
        lsh = _log_sinh(0.5 * ax)
        emh = expm1(-ax)
        coth_h = -(2.0 + emh) / emh
        csch2_h = 4.0 * (1.0 + emh) / (emh * emh)
    with nogil:
        for i in range(n):
            _zeeman_one(Ja[i] + 0.5, ax, lsh, coth_h, csch2_h,
                        &lz[i], &m1[i], &m2[i])
            m1[i] *= sign
    return lz, m1, m2


def block_reduce(logd, E, J, double beta, double x):
    """Log-domain partition sum and weighted moments over all blocks.

    Compiled twin of _kernels_py.block_reduce: one pass computes the
    Zeeman terms and log-weights while tracking the shift, a second
    accumulates the six reductions in fixed order.

    Args:
        logd: log block multiplicities
        E: corrected block energies
        J: block spins
        beta: inverse temperature (> 0)
        x: reduced field beta*gamma*h

    Returns:
        (logZ, E_mean, E2_mean, m_mean, m2_mean, Em_mean)
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ld = np.ascontiguousarray(
        logd, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Ea = np.ascontiguousarray(
        E, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Ja = np.ascontiguousarray(
        J, dtype=np.float64)
    cdef Py_ssize_t n = Ja.shape[0]
    if ld.shape[0] != n or Ea.shape[0] != n:
        raise ValueError("logd, E, J must have equal lengths")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lw = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m1 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m2 = np.empty(n)
    cdef double sign = 1.0 if x >= 0.0 else -1.0
    cdef double ax = fabs(x)
    cdef double lsh = 0.0, coth_h = 0.0, csch2_h = 0.0, emh
    cdef double lz, m1i, m2i, shift, w
    cdef double s0 = 0.0, se = 0.0, se2 = 0.0, sm = 0.0, sm2 = 0.0, sem = 0.0
    cdef Py_ssize_t i
    if ax > 0.0:
        lsh = _log_sinh(0.5 * ax)
        emh = expm1(-ax)
        coth_h = -(2.0 + emh) / emh
        csch2_h = 4.0 * (1.0 + emh) / (emh * emh)
    with nogil:
        shift = -1e308
        for i in range(n):
            _zeeman_one(Ja[i] + 0.5, ax, lsh, coth_h, csch2_h,
                        &lz, &m1i, &m2i)
            m1[i] = m1i * sign
            m2[i] = m2i
            lw[i] = ld[i] + lz - beta * Ea[i]
            if lw[i] > shift:
                shift = lw[i]
        for i in range(n):
            w = exp(lw[i] - shift)
            s0 += w
            se += w * Ea[i]
            se2 += w * Ea[i] * Ea[i]
            sm += w * m1[i]
            sm2 += w * m2[i]
            sem += w * Ea[i] * m1[i]
    return (shift + log(s0), se / s0, se2 / s0,
            sm / s0, sm2 / s0, sem / s0)
