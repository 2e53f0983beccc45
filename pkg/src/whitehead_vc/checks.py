"""Fast identity checks run by ``whitehead-vc check``.

Each check returns a :class:`CheckResult`; randomized checks draw from a
``numpy.random.Generator`` seeded by the caller, so runs are reproducible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import geometry, jones, potential, saddle, specfun, tv
from .potential import PotentialParams
from .specfun import PI, RootData

V8 = 8.0 * specfun.lobachevsky(PI / 4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<34s} value={self.value:.3e}  tol={self.tolerance:.1e}"


def _res(name, value, tol) -> CheckResult:
    return CheckResult(name, bool(value <= tol), float(value), tol)


def check_lobachevsky_symmetry(rng):
    th = rng.uniform(-4, 4, 50)
    L = specfun.lobachevsky
    err = max(max(abs(L(-t) + L(t)), abs(L(t + PI) - L(t))) for t in th)
    return _res("lobachevsky odd/periodic", err, 1e-13)


def check_bloch_wigner(rng):
    zs = rng.normal(size=30) + 1j * rng.normal(size=30)
    D = specfun.bloch_wigner
    err = max(max(abs(D(1 / z) + D(z)), abs(D(z.conjugate()) + D(z))) for z in zs)
    th = rng.uniform(0.05, PI - 0.05, 30)
    err = max(err, max(abs(D(cmath.exp(2j * t)) - 2 * specfun.lobachevsky(t)) for t in th))
    return _res("bloch-wigner symmetries", err, 1e-12)


def check_quantum_dilog(rng):
    err = 0.0
    for r in (11, 21, 51):
        root = RootData.from_r(r)
        for z in np.linspace(0.1 * PI, 0.9 * PI, 9):
            lhs = 1 - cmath.exp(2j * z)
            q = specfun.quantum_dilog
            rhs = cmath.exp(root.half_level / (2j * PI) * (q(z - PI / r, root) - q(z + PI / r, root)))
            err = max(err, abs(lhs - rhs))
    return _res("quantum dilog functional eq.", err, 1e-8)


def check_critical_point(rng):
    res = saddle.solve_critical(PotentialParams(), [0.45, 0.30])
    err = max(abs(res.z_star[0] - 0.5), abs(res.z_star[1] - 0.25),
              abs(res.volume - V8), abs(res.cs_part - PI * PI / 12))
    return _res("critical point (1/2, 1/4)", err, 1e-12)


def check_hessian_det(rng):
    det = np.linalg.det(potential.hess_phi_wl(PotentialParams(), 0.5, 0.25))
    target = 4 * PI * PI * (1 + 1j)
    return _res("hessian determinant", abs(det - target) / abs(target), 1e-10)


def check_gradients(rng):
    worst = 0.0
    h = 1e-5
    for _ in range(10):
        p = PotentialParams(int(rng.choice([-1, 1])), rng.uniform(0.9, 1), rng.uniform(0.9, 1),
                            int(rng.integers(-1, 2)), int(rng.integers(1, 3)), int(rng.integers(0, 2)))
        z = potential.complete_point(p) + 0.03 * (rng.normal(size=p.dim) + 1j * rng.normal(size=p.dim))
        g = potential.grad_phi(p, z)
        for m in range(p.dim):
            e = np.zeros(p.dim)
            e[m] = h
            fd = (potential.phi(p, z + e) - potential.phi(p, z - e)) / (2 * h)
            worst = max(worst, abs(fd - g[m]) / max(1.0, abs(g[m])))
    return _res("gradient vs finite differences", worst, 1e-7)


def check_jones_oracle(rng):
    worst = 0.0
    for N in range(1, 7):
        root = RootData(N)
        for M1 in range(1, N + 1):
            for M2 in range(1, N + 1):
                c = jones.Coloring(M1, M2)
                a = jones.jones_wl(c, root)
                b = complex(jones.jones_wl(c, root, precision="extended", dps=30))
                worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    return _res("jones double vs extended", worst, 1e-12)


def check_gluing(rng):
    worst = 0.0
    for s in ((1.0, 1.0), (0.95, 0.97), (0.97, 0.95)):
        p = PotentialParams(1, *s)
        r = saddle.critical_point(p)
        rep = geometry.gluing_residuals(geometry.shapes_from_z(p, r.z_star))
        worst = max(worst, rep.max_edge_residual, rep.meridian_error, rep.longitude_error)
    return _res("gluing equations and holonomy", worst, 1e-10)


def check_differential(rng):
    worst = 0.0
    p = PotentialParams(1, 0.96, 0.98)
    for _ in range(50):
        z = np.array([rng.uniform(0.35, 0.6), rng.uniform(0.15, 0.3)]) + 1j * rng.uniform(-0.1, 0.1, 2)
        worst = max(worst, geometry.differential_residual(p, z))
    return _res("differential formula", worst, 1e-9)


def check_plus_minus(rng):
    return _res("plus/minus critical values", saddle.plus_minus_agreement(0.96, 0.98), 1e-10)


def check_tv_small(rng):
    worst = 0.0
    for r in (5, 7, 9):
        root = RootData.from_r(r)
        total = sum(abs(jones.jones_wl(jones.Coloring(m1, m2), root)) ** 2
                    for m1 in range(1, root.N + 1) for m2 in range(1, root.N + 1))
        ref = 2 * (2 * math.sin(2 * PI / r) / math.sqrt(r)) ** 2 * total
        worst = max(worst, abs(tv.tv_from_jones(jones.WL, r).value - ref) / ref)
    return _res("turaev-viro direct sum", worst, 1e-12)


def check_clasp_max(rng):
    (x, y, s), m = geometry.maximize_f()
    err = max(abs(x - 0.5), abs(y - 0.25), abs(s - 1.0))
    return _res("clasp bound maximizer", err, 1e-6)


CHECKS: dict[str, Callable] = {
    "lobachevsky": check_lobachevsky_symmetry,
    "bloch_wigner": check_bloch_wigner,
    "quantum_dilog": check_quantum_dilog,
    "critical_point": check_critical_point,
    "hessian": check_hessian_det,
    "gradients": check_gradients,
    "jones_oracle": check_jones_oracle,
    "gluing": check_gluing,
    "differential": check_differential,
    "plus_minus": check_plus_minus,
    "tv_small": check_tv_small,
    "clasp_max": check_clasp_max,
}


def run_checks(seed: int = 20240601, names=None) -> list[CheckResult]:
    out = []
    for name in names or CHECKS:
        out.append(CHECKS[name](np.random.default_rng(seed)))
    return out
