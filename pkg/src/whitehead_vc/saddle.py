"""Critical points of the potential functions.

Damped complex Newton iteration with the analytic Hessian as Jacobian, and
linear-homotopy continuation in ``(s1, s2)`` starting from the complete
structure ``s = (1, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .potential import (
    BranchCutError,
    PotentialParams,
    complete_point,
    grad_phi,
    hess_phi,
    phi,
)

DEFAULT_TOL = 1e-12
DEGENERACY_FLOOR = 1e-6
MAX_ITER = 50


class SolverError(RuntimeError):
    """Newton iteration failed (no convergence, singular Hessian, domain exit)."""


class DomainExitError(SolverError):
    pass


class SingularHessianError(SolverError):
    pass


class PathFailure(SolverError):
    """Continuation stopped; ``path`` holds the waypoints reached so far."""

    def __init__(self, msg: str, path: "ContinuationPath"):
        super().__init__(msg)
        self.path = path


@dataclass(frozen=True)
class CriticalPointResult:
    params: PotentialParams
    z_star: np.ndarray
    residual_norm: float
    hess_det: complex
    value: complex
    iterations: int

    @property
    def volume(self) -> float:
        return 2.0 * math.pi * self.value.real

    @property
    def cs_part(self) -> float:
        return 2.0 * math.pi * self.value.imag


def in_domain(params: PotentialParams, z) -> bool:
    """``Re z_k > 0`` and ``Re z_1 + Re z_k < Re s2`` for ``k >= 2``."""
    z = np.asarray(z)
    if np.any(z.real <= 0):
        return False
    return bool(np.all(z[0].real + z[1:].real < complex(params.s2).real))


def _residual(params, z):
    try:
        g = grad_phi(params, z)
    except BranchCutError:
        return None, math.inf
    return g, float(np.linalg.norm(g))


def solve_critical(params: PotentialParams, z0=None, tol: float = DEFAULT_TOL,
                   max_iter: int = MAX_ITER, det_floor: float = DEGENERACY_FLOOR) -> CriticalPointResult:
    """Newton iteration ``z <- z - H^{-1} grad`` with step-halving on ``||grad||``.

    Raises
    ------
    DomainExitError
        If the start point leaves the domain or every damped step does.
    SingularHessianError
        If ``|det H|`` drops below ``det_floor``.
    SolverError
        If ``||grad|| > tol`` after ``max_iter`` iterations.
    """
    z = complete_point(params) if z0 is None else np.array(z0, dtype=complex)
    if not in_domain(params, z):
        raise DomainExitError(f"start point {z} is outside the domain")
    g, res = _residual(params, z)
    if g is None:
        raise DomainExitError(f"start point {z} hits a branch cut")
    it = 0
    while res > tol and it < max_iter:
        it += 1
        H = hess_phi(params, z)
        det = complex(np.linalg.det(H))
        if abs(det) < det_floor:
            raise SingularHessianError(f"|det Hess| = {abs(det):.3g} at iteration {it}")
        step = np.linalg.solve(H, g)
        lam = 1.0
        for _ in range(30):
            trial = z - lam * step
            if in_domain(params, trial):
                g_t, res_t = _residual(params, trial)
                if res_t < res:
                    break
            lam *= 0.5
        else:
            raise DomainExitError(f"damped Newton step failed at iteration {it} (residual {res:.3g})")
        z, g, res = trial, g_t, res_t
    if res > tol:
        raise SolverError(f"no convergence in {max_iter} iterations (residual {res:.3g})")
    H = hess_phi(params, z)
    det = complex(np.linalg.det(H))
    if abs(det) < det_floor:
        raise SingularHessianError(f"|det Hess| = {abs(det):.3g} at the converged point")
    return CriticalPointResult(params, z, res, det, phi(params, z), it)


@dataclass
class ContinuationPath:
    waypoints: list = field(default_factory=list)
    results: list = field(default_factory=list)

    @property
    def final(self) -> CriticalPointResult:
        return self.results[-1]

    def __len__(self) -> int:
        return len(self.results)


def continue_path(params: PotentialParams, target: tuple, steps: int = 10,
                  tol: float = DEFAULT_TOL, max_halvings: int = 8,
                  max_jump: float = 0.05) -> ContinuationPath:
    """Follow the critical point from ``s = (1, 1)`` to ``target`` linearly.

    Each solve is warm-started from the previous ``z*``.  A failed step (or a
    displacement above ``max_jump``) is halved, at most ``max_halvings`` times
    in a row; a :class:`PathFailure` then carries the last good waypoints.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    t1, t2 = complex(target[0]), complex(target[1])
    path = ContinuationPath()
    base = params.with_s(1.0, 1.0)
    res = solve_critical(base, complete_point(base), tol)
    path.waypoints.append((1.0, 1.0))
    path.results.append(res)
    if t1 == 1 and t2 == 1:
        return path

    def at(tau):
        s1 = 1.0 + tau * (t1 - 1.0)
        s2 = 1.0 + tau * (t2 - 1.0)
        return (s1.real if s1.imag == 0 else s1, s2.real if s2.imag == 0 else s2)

    tau, dtau, fails = 0.0, 1.0 / steps, 0
    while tau < 1.0 - 1e-15:
        nxt = min(1.0, tau + dtau)
        s = at(nxt)
        p = params.with_s(*s)
        try:
            r = solve_critical(p, path.final.z_star, tol)
            if np.max(np.abs(r.z_star - path.final.z_star)) > max_jump:
                raise SolverError("critical point jumped")
        except SolverError as exc:
            fails += 1
            if fails > max_halvings:
                raise PathFailure(f"continuation stalled at s = {at(tau)}: {exc}", path) from exc
            dtau *= 0.5
            continue
        fails = 0
        tau = nxt
        path.waypoints.append(s)
        path.results.append(r)
    return path


def critical_point(params: PotentialParams, steps: int = 10, tol: float = DEFAULT_TOL) -> CriticalPointResult:
    """Continued critical point at ``(params.s1, params.s2)``."""
    return continue_path(params, (params.s1, params.s2), steps, tol).final


def plus_minus_agreement(s1, s2, a: int = 0, c: int = 1, d: int = 0, steps: int = 10) -> float:
    """``|Phi^+(z^+) - Phi^-(z^-)|`` for the two continued critical points."""
    vp = critical_point(PotentialParams(1, s1, s2, a, c, d), steps).value
    vm = critical_point(PotentialParams(-1, s1, s2, a, c, d), steps).value
    return abs(vp - vm)


def evenness_check(s1, s2, a: int = 0, c: int = 1, d: int = 0, steps: int = 10) -> float:
    """``|Re Phi^+(s1) - Re Phi^+(2 - s1)|``: the volume is even in ``u1 = s1 - 1``."""
    v = critical_point(PotentialParams(1, s1, s2, a, c, d), steps).value
    w = critical_point(PotentialParams(1, 2 - s1, s2, a, c, d), steps).value
    return abs(v.real - w.real)
