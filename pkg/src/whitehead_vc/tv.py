"""Turaev-Viro invariants of Whitehead chain complements.

For an ``n``-component link and odd ``r = 2N + 1``,

    TV_r = 2^{n-1} (2 sin(2 pi / r) / sqrt(r))^2  sum_{1 <= M <= N} |J_M(L, t)|^2,

with ``J`` evaluated at ``t = exp(2 pi i / (N + 1/2))``.  The available chain
formula gives all clasps one common color, so for chains with three or more
components only the equal-clasp-color part of the sum is computed; results
carry ``complete=False`` in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jones import LOG2, WL, ChainSpec, jones_all_belt_colors
from .specfun import PI, RootData, lobachevsky

V8 = 8.0 * lobachevsky(PI / 4)


@dataclass(frozen=True)
class TVResult:
    r: int
    log_value: float
    complete: bool = True

    @property
    def value(self) -> float:
        """``TV_r`` as a float (``inf`` beyond the double range; see ``log_value``)."""
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf

    @property
    def log_scaled(self) -> float:
        return 2.0 * PI / self.r * self.log_value


def log_prefactor(n_components: int, r: int) -> float:
    return (n_components - 1) * LOG2 + 2.0 * math.log(2.0 * math.sin(2.0 * PI / r) / math.sqrt(r))


def log_abs_sq_table(spec: ChainSpec, r: int) -> np.ndarray:
    """``log |J_{M1,M2}|^2`` for ``M1, M2 = 1..N``, indexed ``[M1-1, M2-1]``."""
    root = RootData.from_r(r)
    N = root.N
    out = np.empty((N, N))
    with np.errstate(divide="ignore"):
        for M2 in range(1, N + 1):
            vals, top = jones_all_belt_colors(spec, M2, root)
            out[:, M2 - 1] = 2.0 * (np.log(np.abs(vals)) + top * LOG2)
    return out


def _logsumexp(a: np.ndarray) -> float:
    a = a[np.isfinite(a)]
    m = float(a.max())
    return m + math.log(float(np.sum(np.exp(a - m))))


def tv_from_jones(spec: ChainSpec, r: int) -> TVResult:
    """``TV_r`` of the chain complement from its colored Jones values.

    Raises
    ------
    ValueError
        If ``r`` is not an odd integer ``>= 3``.
    """
    if int(r) != r or r < 3 or r % 2 == 0:
        raise ValueError(f"r must be an odd integer >= 3, got {r!r}")
    r = int(r)
    table = log_abs_sq_table(spec, r)
    return TVResult(r, log_prefactor(spec.n_components, r) + _logsumexp(table.ravel()),
                    complete=spec.n_components == 2)


def diagonal_term(spec: ChainSpec, r: int) -> TVResult:
    """Prefactor times the single ``(N, N)`` term, a lower bound for ``TV_r``."""
    root = RootData.from_r(r)
    vals, top = jones_all_belt_colors(spec, root.N, root)
    la = math.log(abs(vals[-1])) + top * LOG2
    return TVResult(r, log_prefactor(spec.n_components, r) + 2.0 * la, complete=False)


@dataclass(frozen=True)
class TVFit:
    """``log TV_r = alpha r + beta log r + gamma``; volume estimate ``2 pi alpha``."""

    alpha: float
    beta: float
    gamma: float
    residual: float
    rs: tuple

    @property
    def volume_estimate(self) -> float:
        return 2.0 * PI * self.alpha


def fit_log_tv(rs: Sequence[int], logs: Sequence[float]) -> TVFit:
    rs_a = np.asarray(rs, dtype=float)
    if len(set(rs_a.tolist())) < 4:
        raise ValueError("need at least 4 distinct r values")
    A = np.column_stack([rs_a, np.log(rs_a), np.ones_like(rs_a)])
    y = np.asarray(logs, dtype=float)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return TVFit(float(coef[0]), float(coef[1]), float(coef[2]),
                 float(np.linalg.norm(A @ coef - y)), tuple(int(r) for r in rs))


def tv_growth(spec: ChainSpec, rs: Sequence[int], diagonal_only: bool = False) -> TVFit:
    """Fit the growth of ``TV_r`` (or of its ``(N, N)`` term) over ``rs``."""
    f = diagonal_term if diagonal_only else tv_from_jones
    return fit_log_tv(rs, [f(spec, r).log_value for r in rs])


@dataclass(frozen=True)
class AuditReport:
    """Per-color check of ``(2 pi / r) log |J|^2 <= (c+d) v8 + C log(r) / r``.

    ``fitted_C`` is the smallest ``C`` making every term pass; the audit
    passes when ``fitted_C <= allowed_C``.
    """

    r: int
    bound: float
    max_scaled: float
    argmax: tuple
    fitted_C: float
    allowed_C: float

    @property
    def passed(self) -> bool:
        return self.fitted_C <= self.allowed_C

    @property
    def margin(self) -> float:
        return self.allowed_C * math.log(self.r) / self.r


def upper_bound_audit(spec: ChainSpec, r: int, allowed_C: float = 6.0 * PI) -> AuditReport:
    """Scan all colors and compare the largest scaled term with ``(c+d) v8``.

    ``allowed_C = 6 pi`` covers a polynomial factor ``|J|^2 ~ r^3``.
    """
    table = log_abs_sq_table(spec, r) * (2.0 * PI / r)
    k = int(np.nanargmax(np.where(np.isfinite(table), table, -np.inf)))
    i, j = divmod(k, table.shape[1])
    bound = (spec.c + spec.d) * V8
    mx = float(table[i, j])
    return AuditReport(r, bound, mx, (i + 1, j + 1), (mx - bound) * r / math.log(r), allowed_C)
