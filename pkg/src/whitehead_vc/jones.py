"""Colored Jones polynomials of the Whitehead link and Whitehead chains.

Evaluated exactly (as finite sums) at ``t = exp(2 pi i / (N + 1/2))``.  With
``w = exp(2 pi i / r)``, ``r = 2N + 1``, every half-integer power of ``t`` is an
integer power of ``w`` (``t**(k/2) = w**k``), so all phases come from one
table of ``r`` roots of unity.

The clasp coefficients obey

    C(n, t; M) = t^{M(M-1)/2} sum_{l=0}^{M-1-n} t^{-M(l+n)} P(n, l),
    P(n, l)    = prod_{j=1}^{n} (1 - t^{M-l-j})(1 - t^{l+j}) / (1 - t^j),

and ``P(n, l) = P(n-1, l) (1 - t^{M-l-n})(1 - t^{l+n}) / (1 - t^n)``, so a full
table costs O(M^2).  The mirror coefficients ``C(n, 1/t; M)`` are complex
conjugates because the sum has integer coefficients.

Large values are carried as :class:`Scaled` numbers ``mantissa * 2**exp2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .specfun import RootData

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class ChainSpec:
    """Whitehead chain with one belt, ``a`` full twists, ``c`` clasps and ``d`` mirror clasps."""

    a: int = 0
    c: int = 1
    d: int = 0

    def __post_init__(self):
        if self.c < 0 or self.d < 0 or self.c + self.d < 1:
            raise ValueError(f"need c, d >= 0 and c + d >= 1, got c={self.c}, d={self.d}")

    @property
    def n_components(self) -> int:
        return 1 + self.c + self.d

    @property
    def is_wl(self) -> bool:
        return (self.a, self.c, self.d) == (0, 1, 0)


WL = ChainSpec(0, 1, 0)


@dataclass(frozen=True)
class Coloring:
    """Colors ``M1`` (belt) and ``M2`` (clasps)."""

    M1: int
    M2: int

    def __post_init__(self):
        if self.M1 < 1 or self.M2 < 1:
            raise ValueError("colors must be positive integers")

    def ratios(self, root: RootData) -> tuple[float, float]:
        """Limiting ratios ``(s1, s2) = (M1, M2) / (N + 1/2)``."""
        return self.M1 / root.half_level, self.M2 / root.half_level

    def check(self, root: RootData) -> None:
        if self.M1 > root.N or self.M2 > root.N:
            raise ValueError(f"colors {self.M1, self.M2} exceed N = {root.N}")

    @classmethod
    def from_ratios(cls, s1: float, s2: float, root: RootData) -> "Coloring":
        """Nearest integer colors to ``s_i (N + 1/2)``, clipped to ``[1, N]``."""
        def pick(s):
            return min(max(int(round(s * root.half_level)), 1), root.N)
        return cls(pick(s1), pick(s2))


@dataclass(frozen=True)
class Scaled:
    """Complex number ``mantissa * 2**exp2`` with unbounded exponent."""

    mantissa: complex
    exp2: int

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exp2 * LOG2

    @property
    def phase(self) -> float:
        return math.atan2(self.mantissa.imag, self.mantissa.real)

    def to_complex(self) -> complex:
        """Plain complex value; raises ``OverflowError`` outside the double range."""
        if self.mantissa == 0:
            return 0j
        if self.exp2 > 1023:
            raise OverflowError(
                f"|value| ~ exp({self.log_abs:.1f}) exceeds double range; use the scaled result"
            )
        return complex(self.mantissa) * math.ldexp(1.0, self.exp2)

    def __mul__(self, other: complex) -> "Scaled":
        return Scaled.normalize(self.mantissa * other, self.exp2)

    @staticmethod
    def normalize(m: complex, e: int) -> "Scaled":
        if m == 0:
            return Scaled(0j, 0)
        k = math.frexp(abs(m))[1]
        return Scaled(complex(m) * 2.0 ** (-k), int(e) + k)


@dataclass(frozen=True)
class ClaspTable:
    """Clasp coefficients ``C(n, t^{+-1}; M2)`` for ``n = 0 .. M2-1``.

    Stored once (scaled); the mirror column is the conjugate.
    """

    M2: int
    root: RootData
    mantissa: np.ndarray
    exp2: np.ndarray

    def __len__(self) -> int:
        return self.M2

    def scaled(self, n: int, mirror: bool = False) -> Scaled:
        m = complex(self.mantissa[n])
        return Scaled(m.conjugate() if mirror else m, int(self.exp2[n]))

    def value(self, n: int, mirror: bool = False) -> complex:
        return self.scaled(n, mirror).to_complex()

    def values(self, mirror: bool = False) -> np.ndarray:
        if self.M2 and int(self.exp2.max()) > 1023:
            raise OverflowError("clasp coefficients exceed double range; use scaled access")
        v = self.mantissa * np.ldexp(1.0, self.exp2)
        return np.conj(v) if mirror else v

    def log_abs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.mantissa)) + self.exp2 * LOG2


@lru_cache(maxsize=64)
def _table_cached(r: int, M2: int) -> ClaspTable:
    m, e = kernels.clasp_table(r, M2)
    m.setflags(write=False)
    e.setflags(write=False)
    return ClaspTable(M2, RootData.from_r(r), m, e)


def clasp_table(M2: int, root: RootData) -> ClaspTable:
    """Full clasp table for color ``M2`` (cached per ``(r, M2)``)."""
    if not 1 <= M2 <= root.N:
        raise ValueError(f"M2 must lie in [1, {root.N}], got {M2}")
    return _table_cached(root.r, M2)


def clasp_coeff(n: int, coloring: Coloring, root: RootData, mirror: bool = False,
                precision: str = "double", dps: int = 50):
    """``C(n, t; M2)``, or ``C(n, 1/t; M2)`` when ``mirror`` is set.

    With ``precision="extended"`` the value is an ``mpmath.mpc``.
    """
    M2 = coloring.M2
    if not 0 <= n < M2:
        raise ValueError(f"need 0 <= n < M2 = {M2}, got {n}")
    if precision == "extended":
        v = _clasp_table_mp(root.r, M2, dps)[n]
        return v.conjugate() if mirror else v
    _check_precision(precision)
    return clasp_table(M2, root).value(n, mirror)


PRECISIONS = ("auto", "double", "extended")

# above this cancellation factor sum|terms| / |sum| the automatic mode
# re-evaluates in extended precision (double keeps ~1e-16 * factor)
AUTO_CANCELLATION = 100.0


def _check_precision(precision: str) -> None:
    if precision not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, not {precision!r}")


def _framing(M2: int, root: RootData) -> complex:
    return root.omega_power(M2 * M2 - 1)


def _inv_denominator(root: RootData) -> complex:
    return 1.0 / (root.omega_power(1) - root.omega_power(-1))


def jones_chain_scaled(spec: ChainSpec, coloring: Coloring, root: RootData) -> Scaled:
    """Scaled ``J_{M1,M2}(W_{a,1,c,d})`` at ``t``; never overflows."""
    coloring.check(root)
    tab = clasp_table(coloring.M2, root)
    m, e = kernels.chain_sum(root.r, coloring.M1, spec.a, spec.c, spec.d, tab.mantissa, tab.exp2)
    return Scaled.normalize(complex(m) * _inv_denominator(root), int(e))


def jones_wl_scaled(coloring: Coloring, root: RootData) -> Scaled:
    return jones_chain_scaled(WL, coloring, root) * _framing(coloring.M2, root)


def log10_cancellation(spec: ChainSpec, coloring: Coloring, root: RootData,
                       value: Scaled | None = None) -> float:
    """``log10(sum_n |term_n| / |sum_n term_n|)`` for the belt-color sum."""
    tab = clasp_table(coloring.M2, root)
    if value is None:
        value = jones_chain_scaled(spec, coloring, root)
    n = np.arange(coloring.M2)
    sine = np.abs(2.0 * np.sin(2.0 * np.pi * coloring.M1 * (2 * n + 1) / root.r))
    with np.errstate(divide="ignore"):
        logs = np.log(sine) + (spec.c + spec.d) * tab.log_abs()
    logs = logs[np.isfinite(logs)]
    top = float(logs.max())
    lse = top + math.log(float(np.sum(np.exp(logs - top))))
    lse -= math.log(abs(2.0 * math.sin(2.0 * math.pi / root.r)))
    return (lse - value.log_abs) / math.log(10.0)


def _evaluate(spec, coloring, root, precision, dps, framing):
    _check_precision(precision)
    if precision == "extended":
        return _jones_mp(spec, coloring, root, dps, framing)
    sc = jones_chain_scaled(spec, coloring, root)
    if framing:
        sc = sc * _framing(coloring.M2, root)
    if precision == "auto":
        if sc.mantissa == 0:
            k = math.inf
        else:
            k = log10_cancellation(spec, coloring, root, sc)
        if k > math.log10(AUTO_CANCELLATION):
            digits = 25 + (int(math.ceil(k)) if math.isfinite(k) else 30)
            return complex(_jones_mp(spec, coloring, root, max(dps, digits), framing))
    return sc.to_complex()


def jones_wl(coloring: Coloring, root: RootData, precision: str = "auto", dps: int = 50):
    """Unnormalized ``J_{M1,M2}(WL, t)``.

    ``precision`` is ``"double"`` (compensated double sums), ``"extended"``
    (mpmath with ``dps`` digits, returns ``mpmath.mpc``) or ``"auto"``, which
    runs in double and repeats the sum in extended precision when the
    cancellation factor exceeds :data:`AUTO_CANCELLATION`.  Double results
    beyond the double range raise ``OverflowError``; use the scaled variants.
    """
    return _evaluate(WL, coloring, root, precision, dps, framing=True)


def jones_chain(spec: ChainSpec, coloring: Coloring, root: RootData,
                precision: str = "auto", dps: int = 50):
    """Unnormalized ``J_{M1,M2}(W_{a,1,c,d}, t)`` (framing factor omitted).

    See :func:`jones_wl` for ``precision``.
    """
    return _evaluate(spec, coloring, root, precision, dps, framing=False)


def log_abs_jones(spec: ChainSpec, coloring: Coloring, root: RootData,
                  precision: str = "auto", dps: int = 50) -> float:
    """``log |J_{M1,M2}(W_{a,1,c,d}, t)|`` (the framing phase does not matter).

    Never overflows.  ``"auto"`` switches to extended precision under heavy
    cancellation, as in :func:`jones_wl`.
    """
    _check_precision(precision)
    if precision == "double":
        return jones_chain_scaled(spec, coloring, root).log_abs
    if precision == "auto":
        sc = jones_chain_scaled(spec, coloring, root)
        k = log10_cancellation(spec, coloring, root, sc) if sc.mantissa != 0 else math.inf
        if k <= math.log10(AUTO_CANCELLATION):
            return sc.log_abs
        dps = max(dps, 25 + (int(math.ceil(k)) if math.isfinite(k) else 30))
    import mpmath as mp

    with mp.workdps(dps):
        return float(mp.log(abs(_jones_mp(spec, coloring, root, dps, framing=False))))


def jones_all_belt_colors(spec: ChainSpec, M2: int, root: RootData) -> tuple[np.ndarray, int]:
    """Values for every ``M1 = 1..N`` at fixed ``M2`` as ``(mantissas, exp2)``.

    Entry ``k`` is ``J_{k+1, M2} / 2**exp2`` (framing omitted).
    """
    tab = clasp_table(M2, root)
    vals, top = kernels.chain_sums_all(root.r, spec.a, spec.c, spec.d, tab.mantissa, tab.exp2)
    return np.asarray(vals) * _inv_denominator(root), int(top)


# ---------------------------------------------------------------------------
# extended precision path


@lru_cache(maxsize=16)
def _clasp_table_mp(r: int, M: int, dps: int):
    import mpmath as mp

    with mp.workdps(dps):
        om = [mp.expjpi(mp.mpf(2 * k) / r) for k in range(r)]
        pref = om[(M * (M - 1)) % r]
        row = [mp.mpc(1)] * M
        out = []
        for n in range(M):
            size = M - n
            if n:
                den = 1 - om[(2 * n) % r]
                row = [row[l] * (1 - om[(2 * (M - l - n)) % r]) * (1 - om[(2 * (l + n)) % r]) / den
                       for l in range(size)]
            out.append(pref * mp.fsum(om[(-2 * M * (l + n)) % r] * row[l] for l in range(size)))
        return tuple(out)


def _jones_mp(spec: ChainSpec, coloring: Coloring, root: RootData, dps: int, framing: bool):
    import mpmath as mp

    coloring.check(root)
    r, M1, M2 = root.r, coloring.M1, coloring.M2
    tab = _clasp_table_mp(r, M2, dps)
    with mp.workdps(dps):
        def om(k):
            return mp.expjpi(mp.mpf(2 * (k % r)) / r)
        terms = []
        for n in range(M2):
            k = M1 * (2 * n + 1)
            c = tab[n]
            terms.append((om(k) - om(-k)) * om(2 * spec.a * n * (n + 1))
                         * c ** spec.c * c.conjugate() ** spec.d)
        val = mp.fsum(terms) / (om(1) - om(-1))
        if framing:
            val *= om(M2 * M2 - 1)
        return val


# ---------------------------------------------------------------------------
# growth-rate fits


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares fit ``log|J| = alpha (N+1/2) + beta log(N+1/2) + gamma``."""

    alpha: float
    beta: float
    gamma: float
    residual: float
    n_points: int

    @property
    def volume_estimate(self) -> float:
        return 2.0 * math.pi * self.alpha


def growth_rate(values: Iterable[tuple[float, float]]) -> GrowthFit:
    """Fit ``(N, log|J|)`` pairs; ``2 pi alpha`` estimates the volume.

    Raises
    ------
    ValueError
        With fewer than four distinct ``N`` values (singular design).
    """
    pts = [(float(n), float(v)) for n, v in values]
    ns = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if len(set(ns.tolist())) < 4:
        raise ValueError("growth_rate needs at least 4 distinct N values")
    h = ns + 0.5
    A = np.column_stack([h, np.log(h), np.ones_like(h)])
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    res = float(np.linalg.norm(A @ coef - ys))
    return GrowthFit(float(coef[0]), float(coef[1]), float(coef[2]), res, len(pts))


def sweep_log_abs(spec: ChainSpec, Ns: Sequence[int], colors) -> list[tuple[int, float]]:
    """``(N, log|J|)`` for each ``N`` with ``colors(root) -> Coloring``."""
    out = []
    for N in Ns:
        root = RootData(N)
        out.append((N, log_abs_jones(spec, colors(root), root)))
    return out
