import os
import subprocess
import sys

import numpy as np
import pytest

import whitehead_vc
from whitehead_vc import _pykernels
from whitehead_vc._backend import BACKEND, get_kernels
from whitehead_vc.jones import ChainSpec, Coloring, log10_cancellation
from whitehead_vc.specfun import RootData

try:
    from whitehead_vc import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_active_backend_reported():
    assert whitehead_vc.BACKEND == BACKEND
    assert BACKEND in ("cython", "python")
    assert get_kernels().BACKEND_NAME == BACKEND
    assert get_kernels("python") is _pykernels
    with pytest.raises(ValueError):
        get_kernels("fortran")


def test_omega_table():
    w = _pykernels.omega_table(11)
    assert np.allclose(w, np.exp(2j * np.pi * np.arange(11) / 11), atol=1e-15)


@needs_ext
@pytest.mark.parametrize("r,M", [(11, 5), (41, 20), (201, 100), (1601, 800)])
def test_clasp_tables_agree(r, M):
    mp_, ep = _pykernels.clasp_table(r, M)
    mc, ec = _ckernels.clasp_table(r, M)
    assert np.array_equal(np.asarray(ep), np.asarray(ec))
    assert np.allclose(np.asarray(mc), mp_, rtol=1e-13, atol=1e-300)


@needs_ext
@pytest.mark.parametrize("a,c,d", [(0, 1, 0), (1, 1, 1), (-2, 0, 2), (3, 2, 1)])
def test_chain_sums_agree(a, c, d):
    # both sums are accurate relative to sum |terms|, so the tolerance scales
    # with the cancellation factor of each value
    r = 81
    root = RootData.from_r(r)
    spec = ChainSpec(a, c, d)
    for M2 in (1, 17, 40):
        m, e = _pykernels.clasp_table(r, M2)
        for M1 in (1, 20, 40):
            vp, xp = _pykernels.chain_sum(r, M1, a, c, d, m, e)
            vc, xc = _ckernels.chain_sum(r, M1, a, c, d, m, e)
            kappa = 10 ** log10_cancellation(spec, Coloring(M1, M2), root)
            assert abs(vp * 2.0 ** (xp - xc) - vc) <= 1e-14 * max(kappa, 1.0) * abs(vc)
        ap, tp = _pykernels.chain_sums_all(r, a, c, d, m, e)
        ac, tc = _ckernels.chain_sums_all(r, a, c, d, m, e)
        assert np.allclose(np.asarray(ap) * 2.0 ** (tp - tc), np.asarray(ac), rtol=0,
                           atol=1e-13 * M2 * r)


def _backend_in_subprocess(value):
    env = dict(os.environ, WHITEHEAD_VC_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "import whitehead_vc; print(whitehead_vc.BACKEND)"],
                          capture_output=True, text=True, env=env, check=False)


def test_environment_forces_python_fallback():
    proc = _backend_in_subprocess("python")
    assert proc.returncode == 0 and proc.stdout.strip() == "python"


def test_environment_rejects_unknown_backend():
    proc = _backend_in_subprocess("fortran")
    assert proc.returncode != 0
    assert "WHITEHEAD_VC_BACKEND" in proc.stderr


@needs_ext
def test_environment_selects_extension():
    proc = _backend_in_subprocess("cython")
    assert proc.stdout.strip() == "cython"


def test_fallback_gives_same_jones_values():
    code = ("from whitehead_vc.jones import *; from whitehead_vc.specfun import RootData;"
            "print(repr(jones_chain(ChainSpec(1, 1, 1), Coloring(30, 28), RootData(30), precision='double')))")
    vals = []
    for value in ("python", "auto"):
        env = dict(os.environ, WHITEHEAD_VC_BACKEND=value)
        out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        vals.append(complex(out.stdout.strip()))
    assert abs(vals[0] - vals[1]) <= 1e-12 * abs(vals[1])
