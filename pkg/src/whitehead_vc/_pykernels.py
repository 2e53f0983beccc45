"""Pure numpy implementation of the Jones-sum kernels.

Every quantity is kept as ``mantissa * 2**exponent`` so that sums whose
magnitude exceeds the double range (chains at large N) stay finite.  All
powers of ``t`` are powers of ``omega = exp(2 pi i / r)`` with indices
reduced modulo ``r``.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def omega_table(r: int) -> np.ndarray:
    k = np.arange(r)
    ang = 2.0 * np.pi * k / r
    return np.cos(ang) + 1j * np.sin(ang)


def _csum(v: np.ndarray) -> complex:
    # correctly rounded summation of real and imaginary parts
    return complex(math.fsum(v.real), math.fsum(v.imag))


def clasp_table(r: int, M: int):
    """Scaled clasp coefficients ``C(n) = mant[n] * 2**exp2[n]`` for ``n < M``.

    ``C(n) = w^{M(M-1)} sum_l w^{-2M(l+n)} P(n, l)`` with ``w = exp(2 pi i/r)``
    and the product ``P`` advanced one factor per ``n``.
    """
    if not 1 <= M < r:
        raise ValueError(f"need 1 <= M < r, got M={M}, r={r}")
    om = omega_table(r)
    mant = np.zeros(M, dtype=complex)
    exp2 = np.zeros(M, dtype=np.int64)
    pref = om[(M * (M - 1)) % r]
    row = np.ones(M, dtype=complex)
    row_exp = 0
    l_all = np.arange(M)
    for n in range(M):
        size = M - n
        l = l_all[:size]
        if n > 0:
            row = row[:size] * (1.0 - om[(2 * (M - l - n)) % r]) * (1.0 - om[(2 * (l + n)) % r])
            row /= 1.0 - om[(2 * n) % r]
            peak = float(np.max(np.abs(row)))
            if peak > 0.0:
                e = math.frexp(peak)[1]
                row *= 2.0 ** (-e)
                row_exp += e
        s = pref * _csum(om[(-2 * M * (l + n)) % r] * row)
        if s == 0:
            mant[n], exp2[n] = 0.0, row_exp
            continue
        e = math.frexp(abs(s))[1]
        mant[n] = s * 2.0 ** (-e)
        exp2[n] = row_exp + e
    return mant, exp2


def _term_scaled(r, a, c, d, mant, exp2):
    # clasp part C^c conj(C)^d times the twist phase, exponent (c+d) exp2
    M = mant.shape[0]
    om = omega_table(r)
    n = np.arange(M)
    twist = om[(2 * a * n * (n + 1)) % r]
    body = twist * mant ** c * np.conj(mant) ** d
    ex = (c + d) * exp2
    live = body != 0
    if not live.any():
        return body, ex, 0
    top = int(ex[live].max())
    return body, ex, top


def chain_sum(r: int, M1: int, a: int, c: int, d: int, mant, exp2):
    """``sum_n (w^{M1(2n+1)} - w^{-M1(2n+1)}) w^{2a n(n+1)} C(n)^c conj(C(n))^d``.

    Returns ``(mantissa, exponent)``.
    """
    mant = np.asarray(mant, dtype=complex)
    exp2 = np.asarray(exp2, dtype=np.int64)
    body, ex, top = _term_scaled(r, a, c, d, mant, exp2)
    om = omega_table(r)
    n = np.arange(mant.shape[0])
    k = (M1 * (2 * n + 1)) % r
    sine = om[k] - om[(-k) % r]
    scale = np.ldexp(1.0, np.maximum(ex - top, -1100))
    s = _csum(sine * body * scale)
    if s == 0:
        return 0j, 0
    e = math.frexp(abs(s))[1]
    return s * 2.0 ** (-e), top + e


def chain_sums_all(r: int, a: int, c: int, d: int, mant, exp2):
    """:func:`chain_sum` for every ``M1 = 1 .. (r-1)/2``; shared exponent."""
    mant = np.asarray(mant, dtype=complex)
    exp2 = np.asarray(exp2, dtype=np.int64)
    body, ex, top = _term_scaled(r, a, c, d, mant, exp2)
    scale = np.ldexp(1.0, np.maximum(ex - top, -1100))
    v = body * scale
    om = omega_table(r)
    N = (r - 1) // 2
    m1 = np.arange(1, N + 1)[:, None]
    n = np.arange(mant.shape[0])[None, :]
    k = (m1 * (2 * n + 1)) % r
    sine = om[k] - om[(-k) % r]
    out = np.array([_csum(row) for row in sine * v[None, :]])
    return out, top
