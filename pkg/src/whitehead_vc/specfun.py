"""Classical and quantum dilogarithms.

All functions here are pure and operate on Python scalars.  The classical
functions (``dilog``, ``lobachevsky``, ``bloch_wigner``) are used in the hot
paths of the potential and geometry modules, so they avoid numpy overhead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

PI = math.pi
ZETA2 = PI * PI / 6.0

_CUT_TOL = 1e-14


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


def _bernoulli(n_max: int) -> list[Fraction]:
    # Akiyama-Tanigawa; returns B_0..B_n_max with B_1 = -1/2
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n_max >= 1:
        out[1] = -out[1]
    return out


def _bernoulli_li2_coeffs(n_terms: int = 22) -> tuple[float, ...]:
    # Li2(z) = sum_n B_n u^(n+1) / (n+1)!,  u = -log(1 - z)
    b = _bernoulli(2 * n_terms)
    coeffs = [float(b[0]), float(b[1]) / 2.0]
    for k in range(1, n_terms):
        coeffs.append(float(b[2 * k] / math.factorial(2 * k + 1)))
    return tuple(coeffs)


_LI2_BERN = _bernoulli_li2_coeffs()


def _li2_power(z: complex) -> complex:
    # |z| <= 1/2
    total = 0j
    zk = z
    for k in range(1, 80):
        term = zk / (k * k)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        zk *= z
    return total


def _li2_bernoulli(z: complex) -> complex:
    # |z| <= 1 and Re z <= 1/2, so |u| < 1.3
    u = -cmath.log(1.0 - z)
    u2 = u * u
    total = u + _LI2_BERN[1] * u2
    p = u
    for c in _LI2_BERN[2:]:
        p *= u2
        term = c * p
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _li2_unit_disk(z: complex) -> complex:
    if abs(z) <= 0.5:
        return _li2_power(z)
    if z.real <= 0.5:
        return _li2_bernoulli(z)
    # reflection; 1 - z lands in the disk with Re < 1/2
    w = 1.0 - z
    if w == 0:
        return complex(ZETA2)
    return ZETA2 - cmath.log(z) * cmath.log(w) - _li2_bernoulli(w)


def dilog(z: complex) -> complex:
    """Principal branch of the dilogarithm ``Li2(z) = -int_0^z log(1-u)/u du``.

    Raises
    ------
    DomainError
        If ``z`` lies on the branch cut ``(1, inf)``.
    """
    z = complex(z)
    if z.real > 1.0 + _CUT_TOL and abs(z.imag) <= _CUT_TOL * abs(z):
        raise DomainError(f"dilog: {z!r} lies on the branch cut (1, inf)")
    if z == 0:
        return 0j
    if abs(z) <= 1.0:
        return _li2_unit_disk(z)
    # inversion, valid off [0, inf)
    lg = cmath.log(-z)
    return -ZETA2 - 0.5 * lg * lg - _li2_unit_disk(1.0 / z)


def lobachevsky(theta: float) -> float:
    """Lobachevsky function ``-int_0^theta log|2 sin t| dt``.

    Evaluated as half the Clausen value ``Im Li2(exp(2i theta))`` after
    reducing ``theta`` modulo pi.
    """
    th = float(theta)
    th -= PI * round(th / PI)
    if th == 0.0:
        return 0.0
    return 0.5 * dilog(cmath.exp(2j * th)).imag


def lobachevsky_series(theta, dps: int = 30):
    """Extended-precision reference value of the Lobachevsky function.

    Sums ``(1/2) sum_n sin(2 n theta) / n^2`` with mpmath's Clausen routine,
    which evaluates that series in closed form; kept independent of
    :func:`dilog` for cross-checks.
    """
    import mpmath

    with mpmath.workdps(dps):
        return mpmath.clsin(2, 2 * mpmath.mpf(theta)) / 2


def bloch_wigner(z: complex) -> float:
    """Bloch-Wigner dilogarithm ``D(z) = Im Li2(z) + log|z| Arg(1 - z)``."""
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError(f"bloch_wigner undefined at {z!r}")
    if abs(z) > 1.0:
        # D(1/z) = -D(z); keeps the evaluation inside the unit disk
        return -bloch_wigner(1.0 / z)
    return dilog(z).imag + math.log(abs(z)) * cmath.phase(1.0 - z)


# ---------------------------------------------------------------------------
# quantum dilogarithm


@dataclass(frozen=True)
class RootData:
    """Evaluation point ``t = exp(2 pi i / (N + 1/2))`` for odd level ``r = 2N + 1``."""

    N: int
    r: int = field(init=False)
    half_level: float = field(init=False)
    t: complex = field(init=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "r", 2 * int(self.N) + 1)
        object.__setattr__(self, "half_level", self.N + 0.5)
        object.__setattr__(self, "t", cmath.exp(2j * PI * 2 / self.r))

    @classmethod
    def from_r(cls, r: int) -> "RootData":
        if r < 3 or r % 2 == 0:
            raise ValueError(f"r must be an odd integer >= 3, got {r!r}")
        return cls((r - 1) // 2)

    def omega_power(self, k: int) -> complex:
        """``exp(2 pi i k / r)``, i.e. ``t**(k/2)``, with the index reduced mod r."""
        k %= self.r
        ang = 2.0 * PI * k / self.r
        return complex(math.cos(ang), math.sin(ang))


@dataclass(frozen=True)
class QuadratureConfig:
    semicircle_radius: float = 0.5
    panel_count: int = 8
    tail_cutoff: float = 1e-18
    target_abs_error: float = 1e-13
    order: int = 20
    max_doublings: int = 9

    def __post_init__(self):
        if not 0.0 < self.semicircle_radius < 1.0:
            raise ValueError("semicircle_radius must lie in (0, 1)")
        if self.panel_count < 1:
            raise ValueError("panel_count must be positive")
        if self.tail_cutoff <= 0 or self.target_abs_error <= 0:
            raise ValueError("tail_cutoff and target_abs_error must be positive")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def _composite(func, a: float, b: float, panels: int, order: int) -> complex:
    x, w = _gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return complex(np.sum(weights * func(nodes)))


def _adaptive(func, a: float, b: float, cfg: QuadratureConfig) -> complex:
    panels = cfg.panel_count
    prev = _composite(func, a, b, panels, cfg.order)
    for _ in range(cfg.max_doublings):
        panels *= 2
        cur = _composite(func, a, b, panels, cfg.order)
        if abs(cur - prev) < cfg.target_abs_error:
            return cur
        prev = cur
    raise ConvergenceError(
        f"quadrature on [{a}, {b}] did not reach {cfg.target_abs_error:g} "
        f"after {panels} panels (last change {abs(cur - prev):.3g})"
    )


def quantum_dilog(z: complex, root: RootData, cfg: QuadratureConfig | None = None) -> complex:
    """Quantum dilogarithm ``phi_r(z)`` at odd level ``r = root.r``.

    ``phi_r(z) = (4 pi i / r) int_Omega exp((2z - pi) x) / (4 x sinh(pi x) sinh(2 pi x / r)) dx``
    where ``Omega`` runs along the real axis and detours over the pole at 0
    by an upper semicircle.  The two real tails are folded onto ``[eps, X]``.

    Defined for ``-pi/r < Re z < pi + pi/r``.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    z = complex(z)
    r = root.r
    lo, hi = -PI / r, PI + PI / r
    if not lo < z.real < hi:
        raise DomainError(f"quantum_dilog: Re z = {z.real} outside ({lo}, {hi})")
    eps = cfg.semicircle_radius
    w = 2.0 * z - PI
    b = 2.0 * PI / r

    def tail(x):
        # f(x) + f(-x) with all exponentials decaying
        num = np.exp((w - PI - b) * x) - np.exp(-(w + PI + b) * x)
        den = x * (-np.expm1(-2.0 * PI * x)) * (-np.expm1(-2.0 * b * x))
        return num / den

    decay = PI + b - abs(w.real)
    # |tail(x)| <~ exp(-decay x) / (x (1 - e^{-2bx})); grow X until below cutoff
    x_end = max(2.0 * eps, 1.0)
    while abs(tail(np.array([x_end]))[0]) > cfg.tail_cutoff:
        x_end *= 1.5
        if x_end * decay > 2000:
            raise ConvergenceError("quantum_dilog: tail does not decay")

    def semi(theta):
        x = eps * np.exp(1j * theta)
        f = np.exp(w * x) / (4.0 * x * np.sinh(PI * x) * np.sinh(b * x))
        return f * 1j * x

    # semicircle is traversed from theta = pi to 0
    i_semi = -_adaptive(semi, 0.0, PI, cfg)
    i_tail = _adaptive(tail, eps, x_end, cfg)
    return (4j * PI / r) * (i_semi + i_tail)
