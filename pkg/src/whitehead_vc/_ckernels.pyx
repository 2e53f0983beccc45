# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Jones-sum kernels; same API and scaling as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs, frexp, ldexp, M_PI, hypot

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline void _neumaier(double x, double* s, double* comp) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        comp[0] += (s[0] - t) + x
    else:
        comp[0] += (x - t) + s[0]
    s[0] = t


cdef inline long _mod(long k, long r) noexcept nogil:
    cdef long m = k % r
    if m < 0:
        m += r
    return m


def omega_table(long r):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] om = np.empty(r, dtype=np.complex128)
    cdef long k
    cdef double ang
    for k in range(r):
        ang = 2.0 * M_PI * k / r
        om[k] = cos(ang) + 1j * sin(ang)
    return om


def clasp_table(long r, long M):
    if not (1 <= M < r):
        raise ValueError(f"need 1 <= M < r, got M={M}, r={r}")
    cdef double complex[::1] om = omega_table(r)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] mant_a = np.zeros(M, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] exp_a = np.zeros(M, dtype=np.int64)
    cdef double complex[::1] mant = mant_a
    cdef cnp.int64_t[::1] exp2 = exp_a
    cdef double complex[::1] row = np.ones(M, dtype=np.complex128)
    cdef long row_exp = 0
    cdef long n, l, size
    cdef int e
    cdef double peak, a, sr, cr, si, ci, scale
    cdef double complex pref = om[_mod(M * (M - 1), r)]
    cdef double complex den, term, s
    with nogil:
        for n in range(M):
            size = M - n
            if n > 0:
                den = 1.0 - om[_mod(2 * n, r)]
                peak = 0.0
                for l in range(size):
                    row[l] = row[l] * (1.0 - om[_mod(2 * (M - l - n), r)]) \
                        * (1.0 - om[_mod(2 * (l + n), r)]) / den
                    a = hypot(row[l].real, row[l].imag)
                    if a > peak:
                        peak = a
                if peak > 0.0:
                    frexp(peak, &e)
                    scale = ldexp(1.0, -e)
                    for l in range(size):
                        row[l] = row[l] * scale
                    row_exp += e
            sr = 0.0; cr = 0.0; si = 0.0; ci = 0.0
            for l in range(size):
                term = om[_mod(-2 * M * (l + n), r)] * row[l]
                _neumaier(term.real, &sr, &cr)
                _neumaier(term.imag, &si, &ci)
            s = pref * ((sr + cr) + 1j * (si + ci))
            if s == 0:
                mant[n] = 0.0
                exp2[n] = row_exp
                continue
            frexp(hypot(s.real, s.imag), &e)
            mant[n] = s * ldexp(1.0, -e)
            exp2[n] = row_exp + e
    return mant_a, exp_a


cdef double complex _cpow(double complex x, long k) noexcept nogil:
    cdef double complex out = 1.0
    while k > 0:
        if k & 1:
            out = out * x
        x = x * x
        k >>= 1
    return out


cdef long _body(long r, long a, long c, long d, double complex[::1] om,
                const double complex[::1] mant, const cnp.int64_t[::1] exp2,
                double complex[::1] v) noexcept nogil:
    # fills v with twist * C^c conj(C)^d scaled to the returned exponent
    cdef long M = mant.shape[0]
    cdef long n, top = 0, ex
    cdef int found = 0
    cdef double complex m
    for n in range(M):
        m = mant[n]
        if m != 0:
            ex = (c + d) * exp2[n]
            if not found or ex > top:
                top = ex
                found = 1
    for n in range(M):
        m = mant[n]
        if m == 0:
            v[n] = 0.0
            continue
        ex = (c + d) * exp2[n] - top
        if ex < -1100:
            ex = -1100
        v[n] = om[_mod(2 * a * n * (n + 1), r)] * _cpow(m, c) \
            * _cpow(m.conjugate(), d) * ldexp(1.0, <int>ex)
    return top


def chain_sum(long r, long M1, long a, long c, long d, mant_in, exp_in):
    cdef const double complex[::1] mant = np.ascontiguousarray(mant_in, dtype=np.complex128)
    cdef const cnp.int64_t[::1] exp2 = np.ascontiguousarray(exp_in, dtype=np.int64)
    cdef double complex[::1] om = omega_table(r)
    cdef long M = mant.shape[0]
    cdef double complex[::1] v = np.empty(M, dtype=np.complex128)
    cdef long n, k, top
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    cdef double complex term, s
    cdef int e
    with nogil:
        top = _body(r, a, c, d, om, mant, exp2, v)
        for n in range(M):
            k = _mod(M1 * (2 * n + 1), r)
            term = (om[k] - om[_mod(-k, r)]) * v[n]
            _neumaier(term.real, &sr, &cr)
            _neumaier(term.imag, &si, &ci)
    s = (sr + cr) + 1j * (si + ci)
    if s == 0:
        return 0j, 0
    frexp(abs(s), &e)
    return s * ldexp(1.0, -e), top + e


def chain_sums_all(long r, long a, long c, long d, mant_in, exp_in):
    cdef const double complex[::1] mant = np.ascontiguousarray(mant_in, dtype=np.complex128)
    cdef const cnp.int64_t[::1] exp2 = np.ascontiguousarray(exp_in, dtype=np.int64)
    cdef double complex[::1] om = omega_table(r)
    cdef long M = mant.shape[0]
    cdef long N = (r - 1) // 2
    cdef double complex[::1] v = np.empty(M, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out_a = np.empty(N, dtype=np.complex128)
    cdef double complex[::1] out = out_a
    cdef long n, k, m1, top
    cdef double sr, cr, si, ci
    cdef double complex term
    with nogil:
        top = _body(r, a, c, d, om, mant, exp2, v)
        for m1 in range(1, N + 1):
            sr = 0.0; cr = 0.0; si = 0.0; ci = 0.0
            for n in range(M):
                k = _mod(m1 * (2 * n + 1), r)
                term = (om[k] - om[_mod(-k, r)]) * v[n]
                _neumaier(term.real, &sr, &cr)
                _neumaier(term.imag, &si, &ci)
            out[m1 - 1] = (sr + cr) + 1j * (si + ci)
    return out_a, top
