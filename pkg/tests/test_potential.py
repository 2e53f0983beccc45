import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from whitehead_vc.potential import (
    BranchCutError,
    PotentialParams,
    arrowhead_det,
    chain_terms,
    complete_point,
    correction_E,
    discrete_phi,
    grad_phi,
    grad_phi_chain,
    grad_phi_wl,
    hess_phi,
    hess_phi_chain,
    hess_phi_wl,
    phi,
    phi_chain,
    phi_wl,
)
from whitehead_vc.specfun import RootData, dilog, lobachevsky

PI = math.pi
TPI = 2j * PI
V8 = 8 * lobachevsky(PI / 4)


def random_params(rng, chain=True):
    if chain:
        a, c, d = int(rng.integers(-2, 3)), int(rng.integers(0, 3)), int(rng.integers(0, 3))
        if c + d == 0:
            c = 1
    else:
        a, c, d = 0, 1, 0
    return PotentialParams(int(rng.choice([-1, 1])), rng.uniform(0.9, 1), rng.uniform(0.9, 1), a, c, d)


def random_point(rng, p, spread=0.05):
    z = complete_point(p) + spread * (rng.uniform(-1, 1, p.dim) + 1j * rng.uniform(-1, 1, p.dim))
    return z


def fd_grad(f, z, h=1e-5):
    g = np.zeros(len(z), dtype=complex)
    for m in range(len(z)):
        e = np.zeros(len(z))
        e[m] = h
        g[m] = (f(z + e) - f(z - e)) / (2 * h)
    return g


# --- params ---------------------------------------------------------------------------------

def test_params_validation():
    assert PotentialParams().is_wl and PotentialParams().dim == 2
    assert PotentialParams(1, 1, 1, 2, 2, 1).dim == 4
    with pytest.raises(ValueError):
        PotentialParams(sign=0)
    with pytest.raises(ValueError):
        PotentialParams(1, 1, 1, 0, 0, 0)


# --- Whitehead link potential ---------------------------------------------------------------

def test_wl_critical_value():
    val = phi_wl(PotentialParams(), 0.5, 0.25)
    assert val == pytest.approx((V8 + 1j * PI ** 2 / 12) / (2 * PI), abs=1e-14)


def test_wl_signs_agree_at_s1_one():
    rng = np.random.default_rng(1)
    for _ in range(20):
        z1, z2 = random_point(rng, PotentialParams())
        for s2 in (1.0, 0.95):
            assert phi_wl(PotentialParams(1, 1, s2), z1, z2) == phi_wl(PotentialParams(-1, 1, s2), z1, z2)


def test_wl_deformed_value_recomposed_from_dilog():
    s1, s2, z1, z2 = 0.95, 0.98, 0.48, 0.26
    e = cmath.exp
    lin = TPI * ((s1 - 1) * (z1 - 0.5) - (s2 - 1) * (z1 + z2))
    li = (dilog(e(TPI * (s2 - 1) - TPI * (z1 + z2))) - dilog(e(TPI * (s2 - 1) - TPI * z2))
          + dilog(e(TPI * z2)) - dilog(e(TPI * (z1 + z2))) + dilog(e(TPI * z1)))
    assert phi_wl(PotentialParams(1, s1, s2), z1, z2) == pytest.approx(lin + li / TPI, abs=1e-14)


def test_wl_gradient_vanishes_at_complete_point():
    assert np.abs(grad_phi_wl(PotentialParams(), 0.5, 0.25)).max() < 1e-14


def test_wl_hessian_entries_and_determinant():
    H = hess_phi_wl(PotentialParams(), 0.5, 0.25)
    assert H[0, 0] == pytest.approx(TPI * (2j - 1) / 2, abs=1e-13)
    assert H[0, 1] == pytest.approx(TPI * 2j / 2, abs=1e-13)  # 2 pi i * i
    assert H[1, 1] == pytest.approx(TPI * 2j, abs=1e-13)
    assert np.linalg.det(H) == pytest.approx(4 * PI ** 2 * (1 + 1j), rel=1e-12)


def test_linear_part_has_constant_gradient():
    # removing the dilogarithm terms leaves a linear function of z
    rng = np.random.default_rng(2)
    p = PotentialParams(1, 0.93, 0.97)

    def linear_grad(z):
        g = grad_phi_wl(p, *z)
        for t in chain_terms(p):
            lg = cmath.log(1 - t.arg(z))
            g = g + np.array([t.sign * k * lg for k in t.k])
        return g

    ref = linear_grad(complete_point(p))
    for _ in range(10):
        assert np.allclose(linear_grad(random_point(rng, p)), ref, atol=1e-13)


def test_wl_derivatives_match_finite_differences():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = random_params(rng, chain=False)
        z = random_point(rng, p)
        g = grad_phi_wl(p, *z)
        fd = fd_grad(lambda w: phi_wl(p, *w), z)
        assert np.abs(fd - g).max() <= 1e-7 * max(1.0, np.abs(g).max())
        H = hess_phi_wl(p, *z)
        fdH = np.array([fd_grad(lambda w: grad_phi_wl(p, *w)[m], z) for m in range(2)])
        assert np.abs(fdH - H).max() <= 1e-5 * max(1.0, np.abs(H).max())
        assert abs(H[0, 1] - H[1, 0]) <= 1e-12


def test_real_part_on_real_slice_is_lobachevsky_combination():
    p = PotentialParams()
    for x1, x2 in [(0.5, 0.25), (0.3, 0.2), (0.6, 0.1), (0.2, 0.5)]:
        val = phi_wl(p, x1, x2).real
        ref = (-2 * lobachevsky(PI * (x1 + x2)) + 2 * lobachevsky(PI * x2) + lobachevsky(PI * x1)) / PI
        assert val == pytest.approx(ref, abs=1e-12)


def test_branch_cut_monitor():
    # z2 -> 0 sends e^{2 pi i z2} to the cut endpoint from inside; a real
    # argument above 1 is rejected
    p = PotentialParams()
    with pytest.raises(BranchCutError):
        phi_wl(p, 0.5, -0.1j)


# --- chain potential ---------------------------------------------------------------------------

def test_chain_reduces_to_wl():
    rng = np.random.default_rng(4)
    for _ in range(30):
        p = random_params(rng, chain=False)
        z = random_point(rng, p)
        assert abs(phi_chain(p, z) - phi_wl(p, *z)) <= 1e-13
        assert np.abs(grad_phi_chain(p, z) - grad_phi_wl(p, *z)).max() <= 1e-13
        assert np.abs(hess_phi_chain(p, z) - hess_phi_wl(p, *z)).max() <= 1e-12


@pytest.mark.parametrize("a,c,d", [(0, 2, 0), (1, 1, 1), (-2, 0, 3), (2, 3, 1), (0, 1, 2)])
def test_chain_critical_value_gradient_and_determinant(a, c, d):
    p = PotentialParams(1, 1, 1, a, c, d)
    z = complete_point(p)
    expect = (8 * (c + d) * lobachevsky(PI / 4) + (c - d) * PI ** 2 * 1j / 12) / (2 * PI)
    assert phi_chain(p, z) == pytest.approx(expect, abs=1e-13)
    assert np.abs(grad_phi_chain(p, z)).max() < 1e-13
    H = hess_phi_chain(p, z)
    m = c + d
    closed = TPI ** (m + 1) * (2j) ** (m - 1) * ((m * 1j - (c - d) / 2 + 2 * a) * 2j - m * (1j) ** 2)
    assert np.linalg.det(H) == pytest.approx(closed, rel=1e-11)
    # arrowhead structure: only z1 couples to the others
    off = H[1:, 1:] - np.diag(np.diag(H[1:, 1:]))
    assert np.abs(off).max() == 0
    a1, a2, a3 = H[0, 0], H[0, 1], H[1, 1]
    if np.allclose(np.diag(H)[1:], a3) and np.allclose(H[0, 1:], a2):
        assert arrowhead_det(a1, a2, a3, m + 1) == pytest.approx(closed, rel=1e-11)


def test_clasp_and_mirror_block_values():
    psi = PotentialParams(1, 1, 1, 0, 1, 0)
    kappa = PotentialParams(1, 1, 1, 0, 0, 1)
    assert phi_chain(psi, [0.5, 0.25]) == pytest.approx((V8 + 1j * PI ** 2 / 12) / (2 * PI), abs=1e-14)
    assert phi_chain(kappa, [0.5, 0.25]) == pytest.approx((V8 - 1j * PI ** 2 / 12) / (2 * PI), abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_chain_derivatives_match_finite_differences(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    z = random_point(rng, p)
    g = grad_phi_chain(p, z)
    fd = fd_grad(lambda w: phi_chain(p, w), z)
    assert np.abs(fd - g).max() <= 1e-7 * max(1.0, np.abs(g).max())
    H = hess_phi_chain(p, z)
    fdH = np.array([fd_grad(lambda w: grad_phi_chain(p, w)[m], z) for m in range(p.dim)])
    assert np.abs(fdH - H).max() <= 1e-5 * max(1.0, np.abs(H).max())
    assert np.abs(H - H.T).max() <= 1e-12


def test_complex_parameters_accepted():
    p = PotentialParams(1, 0.97 + 0.01j, 0.99 - 0.02j)
    z = complete_point(p)
    g = grad_phi(p, z)
    fd = fd_grad(lambda w: phi(p, w), z)
    assert np.abs(fd - g).max() < 1e-7
    assert hess_phi(p, z).shape == (2, 2)


def test_wrong_dimension_rejected():
    with pytest.raises(ValueError):
        phi_chain(PotentialParams(1, 1, 1, 0, 2, 0), [0.5, 0.25])


# --- discrete potential and correction -----------------------------------------------------------

def _residual(p, M1, M2, N, z):
    root = RootData(N)
    at_ratio = p.with_s(M1 / root.half_level, M2 / root.half_level)
    return abs((discrete_phi(at_ratio, M1, M2, root, z) - phi(at_ratio, z)) * root.half_level
               - correction_E(at_ratio, M2, root, z))


def test_discrete_phi_gap_is_order_one_over_N():
    p = PotentialParams()
    z = complete_point(p)
    gaps = []
    for N in (50, 100):
        root = RootData(N)
        q = p.with_s(N / root.half_level, N / root.half_level)
        gaps.append(abs(discrete_phi(q, N, N, root, z) - phi(q, z)))
    assert gaps[0] / gaps[1] == pytest.approx(2, rel=0.1)


def test_correction_value_at_complete_point():
    # five logs at Z=-1, W=i for M2 = N, evaluated by hand
    N = 40
    root = RootData(N)
    b = TPI * (N / root.half_level - 1)
    e = cmath.exp
    L = lambda x: cmath.log(1 - x)
    ref = 0.5 * (L(e(b - TPI * 0.75)) - L(e(b - TPI * 0.25)) - L(1j) + L(e(TPI * 0.75)) - L(-1))
    p = PotentialParams(1, 1, N / root.half_level)
    assert correction_E(p, N, root, [0.5, 0.25]) == pytest.approx(ref, abs=1e-14)


def test_chain_aggregate_reduces_to_single_block():
    root = RootData(30)
    z = [0.47 + 0.01j, 0.26]
    a = correction_E(PotentialParams(1, 0.98, 0.97, 0, 1, 0), 29, root, z)
    two = correction_E(PotentialParams(1, 0.98, 0.97, 0, 2, 0), 29, root, [z[0], z[1], z[1]])
    assert two == pytest.approx(2 * a, abs=1e-14)


@pytest.mark.parametrize("a,c,d,sign", [(0, 1, 0, 1), (0, 1, 0, -1), (1, 1, 1, 1), (-1, 2, 0, -1), (2, 0, 1, 1)])
def test_correction_residual_is_second_order(a, c, d, sign):
    p = PotentialParams(sign, 1, 1, a, c, d)
    z = complete_point(p) + 0.01 * np.arange(p.dim) * (1 + 1j)
    z[0] = 0.47 + 0.02j  # away from z1 = 1/2 so the twist correction is exercised
    N = 50
    M1, M2 = 48, 49
    r1 = _residual(p, M1, M2, N, z)
    r2 = _residual(p, 2 * M1, 2 * M2 + 1, 2 * N, z)
    assert 1.3 <= r1 / r2 <= 2.7


def test_twist_correction_needs_its_own_term():
    # dropping the 2 pi i a (z1 - 1/2) term destroys the second-order scaling
    p = PotentialParams(1, 1, 1, 2, 1, 0)
    z = np.array([0.45 + 0.02j, 0.27])
    res = []
    for N in (50, 100):
        root = RootData(N)
        q = p.with_s(1 - 1 / (2 * root.half_level), 1 - 1 / (2 * root.half_level))
        E = correction_E(q, N, root, z) - TPI * q.a * (z[0] - 0.5)
        res.append(abs((discrete_phi(q, N, N, root, z) - phi(q, z)) * root.half_level - E))
    assert res[0] / res[1] < 1.1
