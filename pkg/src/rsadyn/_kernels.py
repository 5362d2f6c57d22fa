"""Hot orbit-classification kernels: numba-jitted with a numpy fallback.

The raster and slice probes iterate the homogeneous map

    [t : x : y] -> [t y : y^2 : -delta x y + c y^2 + t^2]

in hardware complex128, renormalizing each step so the largest-modulus
coordinate is 1. Points with t exactly 0 lie on the invariant line, where
the map restricts to the nonsingular linear action (x, y) -> (y, -delta x +
c y); using that branch keeps the whole line (including the blown-up
points) iterable. Recurrence is detected by the projective cross-product
distance against the starting point, sampled at the candidate return times.

Backend selection: the environment flag RSADYN_NO_NUMBA=1 forces the pure
numpy path; otherwise numba is used when importable. Both backends follow
the identical arithmetic per cell, and each is deterministic run-to-run and
across thread counts (cells are independent). `python -m rsadyn.bench`
compares them.
"""

import os

import numpy as np

CLASS_NONRECURRENT = 0
CLASS_INDETERMINATE = 1
CLASS_RECURRENT = 2

_TINY2 = 1e-120  # squared-magnitude floor: an essentially exact [0:0:0] hit


def _numba_disabled():
    return os.environ.get("RSADYN_NO_NUMBA", "").strip().lower() in (
        "1", "true", "yes", "on")


HAVE_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit as _njit
        HAVE_NUMBA = True
    except ImportError:
        HAVE_NUMBA = False


def _classify_cell_py(t, x, y, delta, c, n, candidates, eps2):
    """Classify one start point; returns (class, recurrence step or -1)."""
    m2 = max(t.real * t.real + t.imag * t.imag,
             x.real * x.real + x.imag * x.imag,
             y.real * y.real + y.imag * y.imag)
    if m2 < _TINY2:
        return CLASS_INDETERMINATE, -1
    t0, x0, y0 = t, x, y
    den0 = (t0.real * t0.real + t0.imag * t0.imag
            + x0.real * x0.real + x0.imag * x0.imag
            + y0.real * y0.real + y0.imag * y0.imag)
    h = 0
    for ci in range(candidates.shape[0]):
        target = candidates[ci]
        while h < target:
            for _ in range(n):
                if t == 0:
                    nt = 0j
                    nx = y
                    ny = -delta * x + c * y
                else:
                    nt = t * y
                    nx = y * y
                    ny = -delta * x * y + c * y * y + t * t
                a2t = nt.real * nt.real + nt.imag * nt.imag
                a2x = nx.real * nx.real + nx.imag * nx.imag
                a2y = ny.real * ny.real + ny.imag * ny.imag
                m2 = a2t
                if a2x > m2:
                    m2 = a2x
                if a2y > m2:
                    m2 = a2y
                if m2 < _TINY2:
                    return CLASS_INDETERMINATE, h
                if a2t == m2:
                    piv = nt
                elif a2x == m2:
                    piv = nx
                else:
                    piv = ny
                t = nt / piv
                x = nx / piv
                y = ny / piv
            h += 1
        c1 = x * y0 - y * x0
        c2 = y * t0 - t * y0
        c3 = t * x0 - x * t0
        num = (c1.real * c1.real + c1.imag * c1.imag
               + c2.real * c2.real + c2.imag * c2.imag
               + c3.real * c3.real + c3.imag * c3.imag)
        den = (t.real * t.real + t.imag * t.imag
               + x.real * x.real + x.imag * x.imag
               + y.real * y.real + y.imag * y.imag) * den0
        if num < eps2 * den:
            return CLASS_RECURRENT, target
    return CLASS_NONRECURRENT, -1


def _h_distances_py(t, x, y, delta, c, n, nsteps, out):
    """Projective distance to the start after each n-fold iterate."""
    t0, x0, y0 = t, x, y
    den0 = (t0.real * t0.real + t0.imag * t0.imag
            + x0.real * x0.real + x0.imag * x0.imag
            + y0.real * y0.real + y0.imag * y0.imag)
    for h in range(nsteps):
        for _ in range(n):
            if t == 0:
                nt = 0j
                nx = y
                ny = -delta * x + c * y
            else:
                nt = t * y
                nx = y * y
                ny = -delta * x * y + c * y * y + t * t
            a2t = nt.real * nt.real + nt.imag * nt.imag
            a2x = nx.real * nx.real + nx.imag * nx.imag
            a2y = ny.real * ny.real + ny.imag * ny.imag
            m2 = a2t
            if a2x > m2:
                m2 = a2x
            if a2y > m2:
                m2 = a2y
            if m2 < _TINY2:
                out[h:] = -1.0
                return
            if a2t == m2:
                piv = nt
            elif a2x == m2:
                piv = nx
            else:
                piv = ny
            t = nt / piv
            x = nx / piv
            y = ny / piv
        c1 = x * y0 - y * x0
        c2 = y * t0 - t * y0
        c3 = t * x0 - x * t0
        num = (c1.real * c1.real + c1.imag * c1.imag
               + c2.real * c2.real + c2.imag * c2.imag
               + c3.real * c3.real + c3.imag * c3.imag)
        den = (t.real * t.real + t.imag * t.imag
               + x.real * x.real + x.imag * x.imag
               + y.real * y.real + y.imag * y.imag) * den0
        out[h] = np.sqrt(num / den)


def _classify_block_py(T, X, Y, delta, c, n, candidates, eps2, classes, steps):
    for i in range(T.shape[0]):
        cl, st = _classify_cell_py(T[i], X[i], Y[i], delta, c, n,
                                   candidates, eps2)
        classes[i] = cl
        steps[i] = st


if HAVE_NUMBA:
    _classify_cell_nb = _njit(cache=True, nogil=True)(_classify_cell_py)

    @_njit(cache=True, nogil=True)
    def _classify_block_nb(T, X, Y, delta, c, n, candidates, eps2,
                           classes, steps):
        for i in range(T.shape[0]):
            cl, st = _classify_cell_nb(T[i], X[i], Y[i], delta, c, n,
                                       candidates, eps2)
            classes[i] = cl
            steps[i] = st

    _h_distances_nb = _njit(cache=True, nogil=True)(_h_distances_py)


def classify_block_numba(T, X, Y, delta, c, n, candidates, eps):
    """Numba backend over flat complex128 arrays; (classes, steps)."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba backend unavailable")
    classes = np.zeros(T.shape[0], dtype=np.uint8)
    steps = np.full(T.shape[0], -1, dtype=np.int64)
    _classify_block_nb(T, X, Y, complex(delta), complex(c), np.int64(n),
                       candidates.astype(np.int64), float(eps) ** 2,
                       classes, steps)
    return classes, steps


def classify_block_numpy(T, X, Y, delta, c, n, candidates, eps):
    """Vectorized lockstep numpy backend; same arithmetic per cell."""
    T = T.astype(np.complex128).copy()
    X = X.astype(np.complex128).copy()
    Y = Y.astype(np.complex128).copy()
    ncells = T.shape[0]
    classes = np.zeros(ncells, dtype=np.uint8)
    steps = np.full(ncells, -1, dtype=np.int64)
    eps2 = float(eps) ** 2

    def mag2(Z):
        return Z.real * Z.real + Z.imag * Z.imag

    with np.errstate(all="ignore"):
        m2 = np.maximum(np.maximum(mag2(T), mag2(X)), mag2(Y))
        dead = m2 < _TINY2
        classes[dead] = CLASS_INDETERMINATE
        active = ~dead

        T0, X0, Y0 = T.copy(), X.copy(), Y.copy()
        den0 = mag2(T0) + mag2(X0) + mag2(Y0)

        h = 0
        for target in candidates:
            while h < target:
                for _ in range(n):
                    is0 = T == 0
                    NT = np.where(is0, 0j, T * Y)
                    NX = np.where(is0, Y, Y * Y)
                    NY = np.where(is0, -delta * X + c * Y,
                                  -delta * X * Y + c * Y * Y + T * T)
                    a2t, a2x, a2y = mag2(NT), mag2(NX), mag2(NY)
                    m2 = np.maximum(np.maximum(a2t, a2x), a2y)
                    newly = active & (m2 < _TINY2)
                    if newly.any():
                        classes[newly] = CLASS_INDETERMINATE
                        active = active & ~newly
                    piv = np.where(a2t == m2, NT, np.where(a2x == m2, NX, NY))
                    safe = np.where(active, piv, 1.0)
                    T = np.where(active, NT / safe, T)
                    X = np.where(active, NX / safe, X)
                    Y = np.where(active, NY / safe, Y)
                h += 1
                if not active.any():
                    break
            if not active.any():
                break
            C1 = X * Y0 - Y * X0
            C2 = Y * T0 - T * Y0
            C3 = T * X0 - X * T0
            num = mag2(C1) + mag2(C2) + mag2(C3)
            den = (mag2(T) + mag2(X) + mag2(Y)) * den0
            hit = active & (num < eps2 * den)
            if hit.any():
                classes[hit] = CLASS_RECURRENT
                steps[hit] = target
                active = active & ~hit
    return classes, steps


BACKEND = "numba" if HAVE_NUMBA else "numpy"


def classify_block(T, X, Y, delta, c, n, candidates, eps):
    """Dispatch to the selected backend."""
    if HAVE_NUMBA:
        return classify_block_numba(T, X, Y, delta, c, n, candidates, eps)
    return classify_block_numpy(T, X, Y, delta, c, n, candidates, eps)


def h_orbit_distances(t, x, y, delta, c, n, nsteps):
    """Distances to the start after each of nsteps n-fold iterates.

    Entries are -1 from the first indeterminate hit onward.
    """
    out = np.zeros(int(nsteps), dtype=np.float64)
    if HAVE_NUMBA:
        _h_distances_nb(complex(t), complex(x), complex(y), complex(delta),
                        complex(c), np.int64(n), np.int64(nsteps), out)
    else:
        _h_distances_py(complex(t), complex(x), complex(y), complex(delta),
                        complex(c), int(n), int(nsteps), out)
    return out


def classify_point(t, x, y, delta, c, n, candidates, eps):
    """Single-point classification through the same cell logic."""
    cell = _classify_cell_nb if HAVE_NUMBA else _classify_cell_py
    cl, st = cell(complex(t), complex(x), complex(y),
                  complex(delta), complex(c), np.int64(n),
                  np.asarray(candidates, dtype=np.int64),
                  float(eps) ** 2)
    return int(cl), int(st)
