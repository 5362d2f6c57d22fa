"""Backend equivalence and determinism of the hot kernels."""

import numpy as np
import pytest

from rsadyn.numeric import as_complex
from rsadyn.probes import candidate_times
from rsadyn import _kernels


@pytest.fixture(scope="module")
def setup(params411):
    cands = np.array(candidate_times(params411.lam, 256), dtype=np.int64)
    us = np.linspace(0.25, 1.25, 30)
    vs = np.linspace(0.0, 0.025, 10)
    uu, vv = np.meshgrid(us, vs)
    T = vv.astype(np.complex128).ravel()
    X = np.ones_like(T)
    Y = uu.astype(np.complex128).ravel()
    return (params411, T, X, Y, cands)


def test_numpy_backend_matches_scalar(setup):
    p, T, X, Y, cands = setup
    delta, c = as_complex(p.delta), as_complex(p.c)
    cls_np, st_np = _kernels.classify_block_numpy(T, X, Y, delta, c, p.n,
                                                  cands, 1e-3)
    for i in range(0, T.size, 7):
        cl, st = _kernels._classify_cell_py(T[i], X[i], Y[i], delta, c, p.n,
                                            cands, 1e-6)
        cl2, st2 = _kernels._classify_cell_py(T[i], X[i], Y[i], delta, c,
                                              p.n, cands, 1e-6)
        assert (cl, st) == (cl2, st2)          # scalar determinism
    assert cls_np.shape == T.shape


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")
def test_backends_agree(setup):
    p, T, X, Y, cands = setup
    delta, c = as_complex(p.delta), as_complex(p.c)
    cls_nb, st_nb = _kernels.classify_block_numba(T, X, Y, delta, c, p.n,
                                                  cands, 1e-3)
    cls_np, st_np = _kernels.classify_block_numpy(T, X, Y, delta, c, p.n,
                                                  cands, 1e-3)
    assert (cls_nb == cls_np).all()
    assert (st_nb == st_np).all()


def test_numpy_backend_deterministic(setup):
    p, T, X, Y, cands = setup
    delta, c = as_complex(p.delta), as_complex(p.c)
    a = _kernels.classify_block_numpy(T, X, Y, delta, c, p.n, cands, 1e-3)
    b = _kernels.classify_block_numpy(T, X, Y, delta, c, p.n, cands, 1e-3)
    assert (a[0] == b[0]).all() and (a[1] == b[1]).all()


def test_line_states_never_indeterminate(setup):
    # the whole invariant line iterates linearly, including the blown-up
    # points and both coordinate vertices
    p, _, _, _, cands = setup
    delta, c = as_complex(p.delta), as_complex(p.c)
    specials = [(0j, 1 + 0j, 0j), (0j, 0j, 1 + 0j)]
    specials += [(0j, 1 + 0j, as_complex(w)) for w in p.orbit]
    for (t, x, y) in specials:
        cl, _ = _kernels.classify_point(t, x, y, delta, c, p.n, cands, 1e-3)
        assert cl == _kernels.CLASS_RECURRENT


def test_env_flag_selects_numpy(tmp_path):
    import subprocess
    import sys
    code = ("import rsadyn._kernels as k; "
            "print(k.BACKEND, k.HAVE_NUMBA)")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"PATH": "/usr/bin:/bin",
                              "RSADYN_NO_NUMBA": "1"},
                         capture_output=True, text=True, cwd="/root/pkg/src")
    assert out.stdout.split() == ["numpy", "False"]


def test_h_orbit_distances_line_point(setup):
    p, _, _, _, _ = setup
    delta, c = as_complex(p.delta), as_complex(p.c)
    dists = _kernels.h_orbit_distances(0j, 1 + 0j, 0.45 + 0j, delta, c,
                                       p.n, 16)
    assert dists.shape == (16,)
    assert dists.max() < 1e-12     # the line is pointwise fixed under H
