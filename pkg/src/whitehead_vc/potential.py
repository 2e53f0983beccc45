"""Potential functions of the Whitehead link and the Whitehead chains.

A potential is a quadratic polynomial in ``z`` plus a signed sum of
``Li2(X_j) / (2 pi i)`` terms with ``X_j = exp(c_j + 2 pi i <k_j, z>)`` and
``k_j`` a vector of -1/0/+1 entries.  This normal form gives the gradient and
Hessian in closed form:

    d/dz_m   Li2(X)/(2 pi i) = -k_m log(1 - X)
    d2/dz_mn Li2(X)/(2 pi i) =  k_m k_n 2 pi i X / (1 - X)

``phi_wl`` and its derivatives are also written out term by term, which
gives an independent check of the generic chain code at ``(a, c, d) = (0, 1, 0)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .specfun import PI, DomainError, RootData, dilog, quantum_dilog, QuadratureConfig

TWO_PI_I = 2j * PI

# distance from the cut (1, inf) at which a Li2/log argument is rejected
CUT_MARGIN = 1e-10


class BranchCutError(DomainError):
    """A Li2 or log argument reached the branch cut ``(1, inf)``."""


@dataclass(frozen=True)
class PotentialParams:
    """Sign and deformation parameters of a potential function.

    ``(a, c, d) = (0, 1, 0)`` is the Whitehead link.  ``s1`` and ``s2`` may be
    complex (the critical points form holomorphic families in them).
    """

    sign: int = 1
    s1: complex = 1.0
    s2: complex = 1.0
    a: int = 0
    c: int = 1
    d: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.c < 0 or self.d < 0 or self.c + self.d < 1:
            raise ValueError("need c, d >= 0 and c + d >= 1")

    @property
    def dim(self) -> int:
        return 1 + self.c + self.d

    @property
    def is_wl(self) -> bool:
        return (self.a, self.c, self.d) == (0, 1, 0)

    def with_s(self, s1, s2) -> "PotentialParams":
        return PotentialParams(self.sign, s1, s2, self.a, self.c, self.d)

    def with_sign(self, sign: int) -> "PotentialParams":
        return PotentialParams(sign, self.s1, self.s2, self.a, self.c, self.d)


def complete_point(params: PotentialParams) -> np.ndarray:
    """Critical point ``(1/2, 1/4, ..., 1/4)`` of the undeformed potential."""
    z = np.full(params.dim, 0.25, dtype=complex)
    z[0] = 0.5
    return z


def _check_arg(x: complex) -> None:
    if x.real > 1.0 and abs(x.imag) < CUT_MARGIN:
        raise BranchCutError(f"argument {x!r} is on the branch cut (1, inf)")


def _log1m(x: complex) -> complex:
    _check_arg(x)
    return cmath.log(1.0 - x)


def _li2(x: complex) -> complex:
    _check_arg(x)
    return dilog(x)


# ---------------------------------------------------------------------------
# Whitehead link, written out


def _wl_args(s2, z1, z2):
    e = cmath.exp
    b = TWO_PI_I * (s2 - 1)
    return (
        e(b - TWO_PI_I * (z1 + z2)),
        e(b - TWO_PI_I * z2),
        e(TWO_PI_I * z2),
        e(TWO_PI_I * (z1 + z2)),
        e(TWO_PI_I * z1),
    )


def phi_wl(params: PotentialParams, z1: complex, z2: complex) -> complex:
    """Whitehead link potential ``Phi^{+-(s1,s2)}(z1, z2)``."""
    s1, s2, sg = params.s1, params.s2, params.sign
    x1, x2, x3, x4, x5 = _wl_args(s2, z1, z2)
    lin = TWO_PI_I * (sg * (s1 - 1) * (z1 - 0.5) - (s2 - 1) * (z1 + z2))
    dil = _li2(x1) - _li2(x2) + _li2(x3) - _li2(x4) + _li2(x5)
    return lin + dil / TWO_PI_I


def grad_phi_wl(params: PotentialParams, z1: complex, z2: complex) -> np.ndarray:
    s1, s2, sg = params.s1, params.s2, params.sign
    x1, x2, x3, x4, x5 = _wl_args(s2, z1, z2)
    l1, l2, l3, l4, l5 = (_log1m(x) for x in (x1, x2, x3, x4, x5))
    g1 = TWO_PI_I * (sg * (s1 - 1) - (s2 - 1)) + l1 + l4 - l5
    g2 = -TWO_PI_I * (s2 - 1) + l1 - l2 - l3 + l4
    return np.array([g1, g2])


def hess_phi_wl(params: PotentialParams, z1: complex, z2: complex) -> np.ndarray:
    x1, x2, x3, x4, x5 = _wl_args(params.s2, z1, z2)
    q1, q2, q3, q4, q5 = (x / (1 - x) for x in (x1, x2, x3, x4, x5))
    h11 = TWO_PI_I * (q1 - q4 + q5)
    h12 = TWO_PI_I * (q1 - q4)
    h22 = TWO_PI_I * (q1 - q2 + q3 - q4)
    return np.array([[h11, h12], [h12, h22]])


# ---------------------------------------------------------------------------
# generic chain potential


@dataclass(frozen=True)
class DilogTerm:
    """``sign * Li2(exp(const + 2 pi i <k, z>)) / (2 pi i)``."""

    sign: int
    const: complex
    k: tuple

    def arg(self, z) -> complex:
        return cmath.exp(self.const + TWO_PI_I * sum(ki * zi for ki, zi in zip(self.k, z) if ki))


def _block_terms(params: PotentialParams, idx: int, mirror: bool) -> list[DilogTerm]:
    n = params.dim
    b = TWO_PI_I * (params.s2 - 1)

    def vec(**entries):
        v = [0] * n
        for pos, val in entries.items():
            v[{"one": 0, "k": idx}[pos]] = val
        return tuple(v)

    if not mirror:
        return [
            DilogTerm(+1, b, vec(one=-1, k=-1)),
            DilogTerm(-1, b, vec(k=-1)),
            DilogTerm(+1, 0j, vec(k=1)),
            DilogTerm(-1, 0j, vec(one=1, k=1)),
            DilogTerm(+1, 0j, vec(one=1)),
        ]
    return [
        DilogTerm(-1, -b, vec(one=1, k=1)),
        DilogTerm(+1, -b, vec(k=1)),
        DilogTerm(-1, 0j, vec(k=-1)),
        DilogTerm(+1, 0j, vec(one=-1, k=-1)),
        DilogTerm(-1, 0j, vec(one=-1)),
    ]


def chain_terms(params: PotentialParams) -> list[DilogTerm]:
    """All Li2 terms: five per clasp block, then five per mirror-clasp block."""
    terms = []
    for i in range(params.c):
        terms += _block_terms(params, 1 + i, mirror=False)
    for i in range(params.d):
        terms += _block_terms(params, 1 + params.c + i, mirror=True)
    return terms


def _poly_parts(params: PotentialParams, z):
    """Value, gradient and Hessian of the quadratic part."""
    n = params.dim
    sg, a = params.sign, params.a
    u = params.s1 - 1
    v = params.s2 - 1
    w1 = z[0] - 0.5
    val = TWO_PI_I * (sg * u * w1 + a * w1 * w1)
    grad = np.zeros(n, dtype=complex)
    grad[0] = TWO_PI_I * (sg * u + 2 * a * w1)
    hess = np.zeros((n, n), dtype=complex)
    hess[0, 0] = TWO_PI_I * 2 * a
    for k in range(1, n):
        # clasps carry -(s2-1), mirror clasps +(s2-1)
        e = -1 if k <= params.c else 1
        val += e * TWO_PI_I * v * (z[0] + z[k])
        grad[0] += e * TWO_PI_I * v
        grad[k] += e * TWO_PI_I * v
    return val, grad, hess


def _as_vec(params: PotentialParams, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape != (params.dim,):
        raise ValueError(f"expected {params.dim} coordinates, got shape {z.shape}")
    return z


def phi_chain(params: PotentialParams, z) -> complex:
    """Chain potential ``Phi^{+-(s1,s2);a,c,d}(z_1, ..., z_{c+d+1})``."""
    z = _as_vec(params, z)
    val, _, _ = _poly_parts(params, z)
    acc = 0j
    for t in chain_terms(params):
        acc += t.sign * _li2(t.arg(z))
    return val + acc / TWO_PI_I


def grad_phi_chain(params: PotentialParams, z) -> np.ndarray:
    z = _as_vec(params, z)
    _, grad, _ = _poly_parts(params, z)
    for t in chain_terms(params):
        lg = _log1m(t.arg(z))
        for m, km in enumerate(t.k):
            if km:
                grad[m] -= t.sign * km * lg
    return grad


def hess_phi_chain(params: PotentialParams, z) -> np.ndarray:
    """Hessian; only z_1 couples to the other coordinates (arrowhead pattern)."""
    z = _as_vec(params, z)
    _, _, hess = _poly_parts(params, z)
    for t in chain_terms(params):
        x = t.arg(z)
        q = TWO_PI_I * t.sign * x / (1 - x)
        nz = [m for m, km in enumerate(t.k) if km]
        for m in nz:
            for n in nz:
                hess[m, n] += t.k[m] * t.k[n] * q
    return hess


def arrowhead_det(a1: complex, a2: complex, a3: complex, size: int) -> complex:
    """Determinant of the arrowhead matrix with corner a1, arms a2, diagonal a3."""
    m = size - 1
    return a3 ** (m - 1) * (a1 * a3 - m * a2 * a2)


def phi(params: PotentialParams, z) -> complex:
    if params.is_wl:
        return phi_wl(params, z[0], z[1])
    return phi_chain(params, z)


def grad_phi(params: PotentialParams, z) -> np.ndarray:
    if params.is_wl:
        return grad_phi_wl(params, z[0], z[1])
    return grad_phi_chain(params, z)


def hess_phi(params: PotentialParams, z) -> np.ndarray:
    if params.is_wl:
        return hess_phi_wl(params, z[0], z[1])
    return hess_phi_chain(params, z)


# ---------------------------------------------------------------------------
# discrete potentials and the 1/(N+1/2) correction


def discrete_phi(params: PotentialParams, M1: int, M2: int, root: RootData, z,
                 cfg: QuadratureConfig | None = None) -> complex:
    """Potential built from the quantum dilogarithm at colors ``(M1, M2)``.

    The Li2 terms of :func:`phi_chain` are replaced by ``phi_r`` evaluated at
    arguments shifted by ``pi / r``; the deformation parameters are the exact
    ratios ``M_i / (N + 1/2)``.
    """
    z = _as_vec(params, z)
    h = root.half_level
    sh = PI / root.r
    u1 = M1 / h - 1
    u2 = M2 / h - 1
    w1 = TWO_PI_I * (z[0] - 0.5)

    def q(w):
        return quantum_dilog(w, root, cfg)

    acc = params.sign * TWO_PI_I * u1 * w1 + params.a * w1 * (w1 + TWO_PI_I / h)
    z1 = z[0]
    for k in range(1, params.dim):
        zk = z[k]
        if k <= params.c:
            acc += -TWO_PI_I * u2 * TWO_PI_I * (z1 + zk)
            acc += (q(M2 * PI / h - PI * z1 - PI * zk - sh) - q(M2 * PI / h - PI * zk - sh)
                    + q(PI * zk + sh) - q(PI * z1 + PI * zk + sh) + q(PI * z1 + sh))
        else:
            acc += TWO_PI_I * u2 * TWO_PI_I * (z1 + zk)
            acc -= (q(-PI * u2 + PI * z1 + PI * zk + sh) - q(-PI * u2 + PI * zk + sh)
                    + q(PI - PI * zk - sh) - q(PI - PI * z1 - PI * zk - sh) + q(PI - PI * z1 - sh))
    return acc / TWO_PI_I


def correction_E(params: PotentialParams, M2: int, root: RootData, z) -> complex:
    """First-order correction ``E`` with ``Phi_disc = Phi + E/(N+1/2) + O(N^-2)``.

    Half-sums of five logarithms per clasp (mirror clasps use the conjugate
    exponents) plus the twist contribution ``2 pi i a (z_1 - 1/2)``.
    """
    z = _as_vec(params, z)
    h = root.half_level
    b = TWO_PI_I * (M2 / h - 1)
    e = cmath.exp
    z1 = z[0]
    total = TWO_PI_I * params.a * (z1 - 0.5)
    for k in range(1, params.dim):
        zk = z[k]
        sg = 1 if k <= params.c else -1
        total += 0.5 * (
            _log1m(e(sg * (b - TWO_PI_I * (z1 + zk))))
            - _log1m(e(sg * (b - TWO_PI_I * zk)))
            - _log1m(e(sg * TWO_PI_I * zk))
            + _log1m(e(sg * TWO_PI_I * (z1 + zk)))
            - _log1m(e(sg * TWO_PI_I * z1))
        )
    return total
