"""Hyperbolic geometry attached to the critical points.

Shape parameters of the octahedral triangulation, the edge (gluing)
equations and cusp holonomies, Bloch-Wigner volumes, the differential
formula relating ``Re Phi`` to the volume, and the clasp growth function
that bounds the Turaev-Viro growth.

Shape conventions: for a shape ``A`` the other two edge parameters are
``A' = 1/(1-A)`` and ``A'' = 1 - 1/A`` (so ``A A' A'' = -1``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .potential import PotentialParams, chain_terms, grad_phi, phi
from .specfun import PI, DomainError, RootData, bloch_wigner, lobachevsky


class PoleError(DomainError):
    """A shape parameter equals 0 or 1, where ``A'`` or ``A''`` has a pole."""


def prime1(a: complex) -> complex:
    if a == 1:
        raise PoleError("shape parameter equals 1")
    return 1.0 / (1.0 - a)


def prime2(a: complex) -> complex:
    if a == 0:
        raise PoleError("shape parameter equals 0")
    return 1.0 - 1.0 / a


@dataclass(frozen=True)
class ShapeAssignment:
    """Exponentiated variables ``Z = e^{2 pi i z1}``, ``W_i``, ``U_i = 1/(Z W_i)``.

    ``B1 = e^{2 pi i s1}``, ``B2 = e^{2 pi i s2}``.  ``c`` of the blocks are
    clasps, the rest mirror clasps.
    """

    Z: complex
    W: tuple
    U: tuple
    B1: complex
    B2: complex
    sign: int = 1
    a: int = 0
    c: int = 1

    @property
    def d(self) -> int:
        return len(self.W) - self.c

    def tetrahedra(self, i: int = 0) -> tuple:
        """The five shapes ``U, Z, W, B2^{-1} W, B2 U`` of octahedron ``i``."""
        W, U = self.W[i], self.U[i]
        return (U, self.Z, W, W / self.B2, self.B2 * U)


def shapes_from_z(params: PotentialParams, z) -> ShapeAssignment:
    z = np.asarray(z, dtype=complex)
    Z = cmath.exp(2j * PI * z[0])
    W = tuple(cmath.exp(2j * PI * zk) for zk in z[1:])
    U = tuple(1.0 / (Z * w) for w in W)
    return ShapeAssignment(Z, W, U, cmath.exp(2j * PI * params.s1), cmath.exp(2j * PI * params.s2),
                           params.sign, params.a, params.c)


@dataclass(frozen=True)
class GluingReport:
    """Deviations of the edge products from their required value 1, and holonomies.

    ``longitude_l2`` is the first clasp's longitude; ``longitudes`` lists all
    of them with the targets in ``longitude_targets`` (``B2^2`` for clasps,
    ``B2^-2`` for mirror clasps).
    """

    edge_residuals: tuple
    meridian_m1: complex
    longitude_l2: complex
    meridian_target: complex
    longitudes: tuple
    longitude_targets: tuple
    closed_form_gaps: tuple

    @property
    def max_edge_residual(self) -> float:
        return max(abs(e) for e in self.edge_residuals)

    @property
    def meridian_error(self) -> float:
        return abs(self.meridian_m1 - self.meridian_target)

    @property
    def longitude_error(self) -> float:
        return max(abs(l - t) for l, t in zip(self.longitudes, self.longitude_targets))


def _vertex_products(Z, W, U, B2):
    """Products of edge parameters around the six cusp vertices of one octahedron."""
    p1, p2 = prime1, prime2
    bw, bu = W / B2, B2 * U
    v_i = (p1(W) * p2(Z) * p1(bw) * p1(bu) * p2(Z) * p1(U)
           * p2(bw) * p1(Z) * p2(U) * p2(W) * p1(Z) * p2(bu))
    v_ii = W * p1(U) * p2(W) * p1(bu) * p2(bw) * bu
    v_iv = U * p1(W) * p2(U) * p1(bw) * p2(bu) * bw
    v_v = W * bu * p2(bw) * p1(bu) * p2(W) * p1(U)
    v_vi = bw * p2(bu) * p1(W) * p2(U) * p1(bw) * U
    return (v_i, v_ii, v_i, v_iv, v_v, v_vi)


def _edge_closed_form(W, U, B2):
    # B2 (1 - B2/W)(1 - W) / ((1 - B2 U)(1 - 1/U)); the edge equations say this is 1
    return B2 * (1 - B2 / W) * (1 - W) / ((1 - B2 * U) * (1 - 1 / U))


def gluing_residuals(shapes: ShapeAssignment) -> GluingReport:
    """Edge-equation residuals and the belt meridian / clasp longitude holonomies.

    Mirror clasps use the same products in the inverted variables
    ``(1/W, 1/U, 1/B2)``.

    Raises
    ------
    PoleError
        If any shape equals 0 or 1.
    """
    Z, B1, B2 = shapes.Z, shapes.B1, shapes.B2
    for s in (Z, *shapes.W, *shapes.U):
        if s == 0 or s == 1:
            raise PoleError(f"shape parameter {s!r} is degenerate")
    edges, gaps, longs, targets = [], [], [], []
    # twist contributes Z^{-2a}: the meridian is the inverse of the exponentiated
    # first critical equation's left side
    meridian = Z ** (-2 * shapes.a)
    for i, (W, U) in enumerate(zip(shapes.W, shapes.U)):
        mirror = i >= shapes.c
        if mirror:
            Zb, Wb, Ub, Bb = 1 / Z, 1 / W, 1 / U, 1 / B2
        else:
            Zb, Wb, Ub, Bb = Z, W, U, B2
        prods = _vertex_products(Zb, Wb, Ub, Bb)
        edges.extend(p - 1.0 for p in prods)
        cf = _edge_closed_form(Wb, Ub, Bb)
        gaps.append(abs(prods[1] - cf))
        gaps.append(abs(prods[3] - 1 / cf))
        # longitude: (B2^{-1} W)' / (B2 U)' * U'' / W''
        longs.append(prime1(Wb / Bb) / prime1(Bb * Ub) * prime2(Ub) / prime2(Wb))
        targets.append(Bb * Bb)
        # belt meridian factor  B2 (1 - Z) / ((1 - B2 U)(1 - 1/U)) per block
        meridian *= Bb * (1 - Zb) / ((1 - Bb * Ub) * (1 - 1 / Ub))
    m_target = B1 if shapes.sign == 1 else 1 / B1
    return GluingReport(tuple(edges), meridian, longs[0], m_target, tuple(longs), tuple(targets), tuple(gaps))


def meridian_literal(shapes: ShapeAssignment, i: int = 0) -> complex:
    """``W'' U' / (W'' Z' (B2 U)'')`` for block ``i`` (complete-structure WL form)."""
    W, U, Z, B2 = shapes.W[i], shapes.U[i], shapes.Z, shapes.B2
    return prime2(W) * prime1(U) / (prime2(W) * prime1(Z) * prime2(B2 * U))


# ---------------------------------------------------------------------------
# volumes


def bw_volume(params: PotentialParams, z) -> float:
    """Signed Bloch-Wigner sum ``V`` over the five-term blocks of the potential."""
    z = np.asarray(z, dtype=complex)
    return float(sum(t.sign * bloch_wigner(t.arg(z)) for t in chain_terms(params)))


def differential_residual(params: PotentialParams, z) -> float:
    """``|Re Phi - V/(2 pi) - sum_k y_k dRePhi/dy_k|`` with ``y = Im z``.

    ``dRePhi/dy_k = -Im dPhi/dz_k`` by the Cauchy-Riemann equations.
    """
    z = np.asarray(z, dtype=complex)
    g = grad_phi(params, z)
    corr = float(np.sum(z.imag * (-g.imag)))
    return abs(phi(params, z).real - bw_volume(params, z) / (2 * PI) - corr)


# ---------------------------------------------------------------------------
# clasp growth function


def _in_delta(x, y, s, tol=1e-12) -> bool:
    return -tol <= s <= 1 + tol and x >= -tol and y >= -tol and x + y <= s + tol


def clasp_bound_f(x: float, y: float, s: float) -> float:
    """``(1/pi)[L(pi(s-x-y)) - L(pi(s-y)) + L(pi y) - L(pi(x+y)) + L(pi x)]``.

    Defined on ``{x, y >= 0, x + y <= s, 0 <= s <= 1}``.
    """
    if not _in_delta(x, y, s):
        raise DomainError(f"({x}, {y}, {s}) lies outside the simplex x, y >= 0, x + y <= s <= 1")
    L = lobachevsky
    return (L(PI * (s - x - y)) - L(PI * (s - y)) + L(PI * y) - L(PI * (x + y)) + L(PI * x)) / PI


@lru_cache(maxsize=4)
def _lob_table(steps: int) -> np.ndarray:
    # Lambda(pi k / steps) for k = 0 .. steps - 1 (period pi)
    return np.array([lobachevsky(PI * k / steps) for k in range(steps)])


def _grid_max(step: float):
    m = int(round(1.0 / step))
    L = _lob_table(m)
    best, arg = -math.inf, (0, 0, 0)
    for ks in range(m + 1):
        kx, ky = np.meshgrid(np.arange(ks + 1), np.arange(ks + 1), indexing="ij")
        ok = kx + ky <= ks
        kx, ky = kx[ok], ky[ok]
        val = (L[(ks - kx - ky) % m] - L[(ks - ky) % m] + L[ky % m] - L[(kx + ky) % m] + L[kx % m]) / PI
        j = int(np.argmax(val))
        if val[j] > best:
            best, arg = float(val[j]), (kx[j] / m, ky[j] / m, ks / m)
    return arg, best


def maximize_f(grid_step: float = 1e-2, tol: float = 1e-8):
    """Maximum of :func:`clasp_bound_f` on its simplex.

    Exhaustive grid at ``grid_step`` (exact Lobachevsky table lookups), then
    compass search with step halving down to ``tol``, staying in the simplex.
    """
    (x, y, s), best = _grid_max(grid_step)
    h = grid_step
    while h >= tol:
        moved = False
        for dx, dy, ds in ((h, 0, 0), (-h, 0, 0), (0, h, 0), (0, -h, 0), (0, 0, h), (0, 0, -h)):
            cand = (x + dx, y + dy, min(s + ds, 1.0))
            if not _in_delta(*cand, tol=0.0):
                continue
            v = clasp_bound_f(*cand)
            if v > best:
                (x, y, s), best, moved = cand, v, True
                break
        if not moved:
            h *= 0.5
    return (x, y, s), best


def boundary_samples(n: int = 200):
    """``f`` sampled on the facets ``y = 0`` and ``x + y = s``; rows ``(x, y, s, f)``."""
    out = []
    for s in np.linspace(0.0, 1.0, n + 1):
        for x in np.linspace(0.0, s, n + 1):
            out.append((x, 0.0, s, clasp_bound_f(x, 0.0, s)))
            out.append((x, s - x, s, clasp_bound_f(x, max(s - x, 0.0), s)))
    return np.array(out)


def log_clasp_product(n: int, l: int, M: int, root: RootData) -> float:
    """``log prod_{j=1}^n |(1 - t^{M-l-j})(1 - t^{l+j}) / (1 - t^j)|``."""
    if not (1 <= n <= M - 1 and 0 <= l <= M - 1 - n):
        raise ValueError("need 1 <= n <= M-1 and 0 <= l <= M-1-n")
    h = root.half_level
    j = np.arange(1, n + 1)

    def lg(k):
        return np.log(2.0 * np.abs(np.sin(PI * k / h)))

    return float(np.sum(lg(M - l - j) + lg(l + j) - lg(j)))


def clasp_growth(x: float, y: float, s: float, root: RootData) -> float:
    """``(1/(N+1/2)) log c_M(n, l)`` at the integer point nearest ``(x, y, s)(N + 1/2)``."""
    h = root.half_level
    M = min(int(round(s * h)), root.N)
    n = max(1, int(round(x * h)))
    l = max(0, min(int(round(y * h)), M - 1 - n))
    return log_clasp_product(n, l, M, root) / h
