"""High-precision and hardware-precision dynamical probes.

Covers: chart-aware orbit iteration with return-event recording; candidate
return times from the continued fraction of the transverse multiplier's
angle; near-identity return measurement close to the invariant line;
Birkhoff-average linearization at the unit-modulus affine fixed points;
recurrence rasters over 2-plane chart slices; and slice-radius bracketing
along the radial leaves.

The raster and slice probes run in hardware precision through the kernels
in ._kernels (numba with numpy fallback); everything else is mpmath at the
parameter pack's precision, or plain complex where hardware precision
demonstrably suffices (documented per function).
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from mpmath import arg, floor, mp, mpc, mpf, pi, workprec

from . import _kernels, family
from .errors import (ExceptionalLocusError, IndeterminatePointError,
                     NumericFailureError, ValidationError)
from .numeric import as_complex, check_precision, proj_distance


# ---------------------------------------------------------------------------
# candidate return times
# ---------------------------------------------------------------------------

def _angle_fraction(lam, precision_bits):
    with workprec(precision_bits):
        theta = arg(mpc(lam)) / (2 * pi)
        theta = theta - floor(theta)
        return theta


def return_times(lam, count, precision_bits=256):
    """Continued-fraction convergent denominators of arg(lam)/2pi.

    These are the candidate near-identity return times: |lam^q - 1| tends to
    0 along them. A rational angle (root of unity) violates the
    precondition and raises ValidationError; running out of precision
    before `count` denominators raises NumericFailureError.
    """
    precision_bits = check_precision(precision_bits)
    if count < 1:
        raise ValidationError("count must be positive")
    with workprec(precision_bits):
        theta = _angle_fraction(lam, precision_bits)
        cutoff = mpf(2) ** (-(precision_bits * 3 // 4))
        digit_cap = mpf(2) ** (precision_bits // 2)
        if theta < cutoff or 1 - theta < cutoff:
            raise ValidationError("rational angle detected: multiplier is a "
                                  "root of unity")
        out = []
        q_prev, q_cur = 0, 1            # denominators k_{-1}, k_0
        x = theta
        while len(out) < count:
            # a vanishing remainder or an absurdly large partial quotient
            # means the angle is rational to working precision: a root of
            # unity, or precision_bits too low for this many candidates
            if x < cutoff:
                raise ValidationError(
                    "angle is rational to working precision (root of "
                    "unity), or precision_bits too low")
            a = int(floor(1 / x))
            if a > digit_cap:
                raise ValidationError(
                    "angle is rational to working precision (root of "
                    "unity), or precision_bits too low")
            x = 1 / x - a
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            if not out or q_cur > out[-1]:
                out.append(q_cur)
        return out[:count]


def candidate_times(lam, budget, precision_bits=256, max_count=64):
    """All return-time candidates <= budget (ascending, deduplicated)."""
    if budget < 1:
        raise ValidationError("budget must be >= 1")
    with workprec(precision_bits):
        theta = _angle_fraction(lam, precision_bits)
        cutoff = mpf(2) ** (-(precision_bits * 3 // 4))
        out = []
        q_prev, q_cur = 0, 1
        x = theta
        for _ in range(max_count):
            if x < cutoff:
                break
            a = int(floor(1 / x))
            x = 1 / x - a
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            if q_cur > budget:
                break
            if not out or q_cur > out[-1]:
                out.append(q_cur)
        if not out:
            raise ValidationError("no return-time candidate within budget %r"
                                  % (budget,))
        return out


def default_budget(lam, precision_bits=256, at_least=10 ** 4):
    """First return-time candidate >= at_least (the default raster budget)."""
    with workprec(precision_bits):
        theta = _angle_fraction(lam, precision_bits)
        q_prev, q_cur = 0, 1
        x = theta
        for _ in range(256):
            a = int(floor(1 / x))
            x = 1 / x - a
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            if q_cur >= at_least:
                return q_cur
            if x == 0:
                break
        return at_least


# ---------------------------------------------------------------------------
# chart-aware orbit iteration (mpmath)
# ---------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    """One iterated orbit with chart tags and recorded near-returns."""

    points: list
    chart_tags: list
    escaped: bool
    indeterminate_hit: bool
    return_events: list = field(default_factory=list)

    def to_csv(self, path):
        """Columns: iterate, chart_tag, re1, im1, re2, im2."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iterate", "chart_tag", "re1", "im1",
                             "re2", "im2"])
            for k, (tag, pt) in enumerate(zip(self.chart_tags, self.points)):
                c1, c2 = pt
                writer.writerow([k, tag,
                                 float(mpf(c1.real)), float(mpf(c1.imag)),
                                 float(mpf(c2.real)), float(mpf(c2.imag))])


def _embed_homog(state, params):
    """Homogeneous [t:x:y] representative of any chart state."""
    kind = state[0]
    if kind == "homog":
        return state[1]
    if kind == "fiber1":
        _, s, (xi, t1) = state
        if s == 0:
            return (t1 * xi, t1, mpc(1))
        w = params.orbit[s - 1]
        return (t1 * xi, mpc(1), t1 + w)
    if kind == "fiber2":
        _, s, (xi2, x2) = state
        if x2 == 0:
            # on the level-2 fiber; the blowdown image is the line point
            if s == 0:
                return (mpc(0), mpc(0), mpc(1))
            return (mpc(0), mpc(1), params.orbit[s - 1])
        xi1 = 1 / x2
        t1 = xi2 * x2 * x2
        if s == 0:
            return (t1 * xi1, t1, mpc(1))
        w = params.orbit[s - 1]
        return (t1 * xi1, mpc(1), t1 + w)
    raise ValidationError("unknown chart state %r" % (kind,))


def _blown_up_points(params):
    """Homogeneous coordinates of the blown-up line points, index = fiber."""
    pts = [(mpc(0), mpc(0), mpc(1))]                       # fiber 0 over [0:0:1]
    for s in range(1, params.n):
        pts.append((mpc(0), mpc(1), params.orbit[s - 1]))  # w_{n-1} = 0 -> e1
    return pts


def _fiber1_step(params, s, xi, t1):
    """Level-1 chart step (xi, t1)_s -> (xi', t1')_{s+1}.

    Charts adapted to the line: {t1 = 0} is the fiber with coordinate xi,
    {xi = 0} is the line's strict transform with coordinate t1. The middle
    step is written through b = delta/w + t1 xi^2/(t1 + w) so the on-fiber
    limit t1 = 0 (where xi -> w xi / delta) needs no special case.
    """
    d, c = params.delta, params.c
    n = params.n
    if s == 0:
        den = -d + t1 * xi * xi
        return (xi / den, t1 * den)
    if s <= n - 2:
        w = params.orbit[s - 1]
        den = t1 + w
        b = d / w + t1 * xi * xi / den
        return (xi / b, t1 * b / den)
    den = -d + c * t1 + t1 * xi * xi
    return (xi, t1 / den)


def iterate(params, z0, nsteps, policy="auto", eps=1e-3, guard=1e-2,
            escape_radius=1e9):
    """Iterate the map with chart awareness, recording returns.

    z0 may be an affine pair or a homogeneous triple. Policies:
    "affine" (raw affine iteration, sets escaped past escape_radius),
    "homogeneous" (projective normalization, indeterminacy recorded
    in-band), "auto" (homogeneous plus level-1 fiber charts within `guard`
    of the blown-up line points, so orbits pass through the blowup
    structure instead of dying at the indeterminacy point). Returns where
    the projective distance to the start is below eps are recorded as
    (iterate index, distance).
    """
    with workprec(params.precision_bits):
        if len(z0) == 2:
            start = (mpc(1), mpc(z0[0]), mpc(z0[1]))
        else:
            start = tuple(mpc(v) for v in z0)

        if policy == "affine":
            return _iterate_affine(params, start, nsteps, eps, escape_radius)

        centers = _blown_up_points(params) if policy == "auto" else []
        state = ("homog", start)
        points = [_state_coords(state)]
        tags = [_state_tag(state)]
        events = []
        indet = False
        for k in range(1, nsteps + 1):
            state = _advance_state(params, state, centers, guard)
            if state is None:
                indet = True
                break
            emb = _embed_homog(state, params)
            dist = proj_distance(emb, start)
            if dist < eps:
                events.append((k, dist))
            points.append(_state_coords(state))
            tags.append(_state_tag(state))
        return OrbitRecord(points=points, chart_tags=tags, escaped=False,
                           indeterminate_hit=indet, return_events=events)


def _state_tag(state):
    if state[0] == "homog":
        return "homog"
    return "%s[%d]" % (state[0], state[1])


def _state_coords(state):
    if state[0] == "homog":
        t, x, y = state[1]
        if abs(t) > 0:
            return (x / t, y / t)
        return (x, y)      # a line point as its [x : y] pair
    return tuple(state[2])


def _iterate_affine(params, start, nsteps, eps, escape_radius):
    t, x, y = start
    if abs(t) == 0:
        raise ValidationError("affine policy cannot start on the line at "
                              "infinity")
    z = (x / t, y / t)
    z0 = z
    points = [z]
    tags = ["affine"]
    events = []
    escaped = False
    indet = False
    for k in range(1, nsteps + 1):
        try:
            z = family.map_affine(params, z)
        except ExceptionalLocusError:
            indet = True
            break
        points.append(z)
        tags.append("affine")
        if max(abs(z[0]), abs(z[1])) > escape_radius:
            escaped = True
            break
        dist = max(abs(z[0] - z0[0]), abs(z[1] - z0[1]))
        if dist < eps:
            events.append((k, dist))
    return OrbitRecord(points=points, chart_tags=tags, escaped=escaped,
                       indeterminate_hit=indet, return_events=events)


def _advance_state(params, state, centers, guard):
    """One map step with chart transitions; None signals an indeterminate hit.

    Transitions carry hysteresis: a homogeneous point within `guard` of a
    blown-up line point enters that fiber's level-1 chart; the level-1 chart
    hands off to level 2 when the fiber coordinate exceeds 1/guard, and each
    chart is left again only past a looser bound, so states do not flap.
    """
    d, c = params.delta, params.c
    n = params.n
    if state[0] == "homog":
        t, x, y = state[1]
        for s, center in enumerate(centers):
            if proj_distance((t, x, y), center) < guard:
                if s == 0:
                    if abs(y) == 0:
                        return None
                    t1 = x / y
                    xi = (t / y) / t1 if t1 != 0 else mpc(0)
                else:
                    w = params.orbit[s - 1]
                    if abs(x) == 0:
                        return None
                    t1 = y / x - w
                    xi = (t / x) / t1 if t1 != 0 else mpc(0)
                return _advance_state(params, ("fiber1", s, (xi, t1)),
                                      centers, guard)
        if abs(t) == 0:
            # invariant-line linear action (nonsingular through both
            # coordinate vertices)
            nx, ny = y, -d * x + c * y
            return ("homog", _safe_norm((mpc(0), nx, ny)))
        nt, nx, ny = t * y, y * y, -d * x * y + c * y * y + t * t
        if max(abs(nt), abs(nx), abs(ny)) == 0:
            return None
        return ("homog", _safe_norm((nt, nx, ny)))

    if state[0] == "fiber1":
        _, s, (xi, t1) = state
        if abs(xi) > 1 / guard:
            # approaching the level-2 center: transfer to the level-2 chart
            return _advance_state(params,
                                  ("fiber2", s, (t1 * xi * xi, 1 / xi)),
                                  centers, guard)
        try:
            nxi, nt1 = _fiber1_step(params, s, xi, t1)
        except ZeroDivisionError:
            return None
        s2 = (s + 1) % n
        if abs(nt1) > 4 * guard:
            # left the fiber neighborhood along the line direction
            emb = _embed_homog(("fiber1", s2, (nxi, nt1)), params)
            return ("homog", _safe_norm(emb))
        return ("fiber1", s2, (nxi, nt1))

    _, s, (xi2, x2) = state
    from .blowup import FiberChartPoint, fiber_map_level2
    try:
        pt = fiber_map_level2(params, FiberChartPoint(level=2, s=s,
                                                      coords=(xi2, x2)))
    except IndeterminatePointError:
        return None
    nxi2, nx2 = pt.coords
    if abs(nx2) > 2 * guard and nxi2 != 0:
        # leave the level-2 chart back through level 1
        return ("fiber1", pt.s, (1 / nx2, nxi2 * nx2 * nx2))
    return ("fiber2", pt.s, (nxi2, nx2))


def _safe_norm(coords):
    mags = [abs(cc) for cc in coords]
    best = max(range(3), key=lambda i: (mags[i], -i))
    piv = coords[best]
    return tuple(cc / piv for cc in coords)


# ---------------------------------------------------------------------------
# near-identity returns along the invariant line
# ---------------------------------------------------------------------------

def near_identity_returns(params, n_candidates=5, n_samples=100,
                          t_scale=1e-6, seed=0):
    """Sup over samples of the distance of the q-th return to the identity.

    Samples sit at transverse distance ~ t_scale from the invariant line,
    spread along it away from the blown-up points; for each candidate
    return time q the sup over samples of dist(H^q z, z) is returned.
    Hardware precision: the measured distances are >= t_scale * |lam^q - 1|
    which stays far above rounding noise for the defaults. The sequence is
    expected to decrease along candidates (near-identity returns).
    """
    import random
    rng = random.Random(seed)
    qs = return_times(params.lam, n_candidates, params.precision_bits)
    delta = as_complex(params.delta)
    c = as_complex(params.c)
    n = params.n
    orbit_vals = [as_complex(w) for w in params.orbit]

    samples = []
    while len(samples) < n_samples:
        w = complex(rng.uniform(0.1, 1.5), rng.uniform(-0.7, 0.7))
        if min(abs(w - wv) for wv in orbit_vals) < 0.05 or abs(w) < 0.05:
            continue
        phase = rng.uniform(0.0, 2.0 * math.pi)
        t = t_scale * complex(math.cos(phase), math.sin(phase))
        samples.append((t, 1.0 + 0.0j, w))

    sups = []
    for q in qs:
        worst = 0.0
        for (t, x, y) in samples:
            dists = _kernels.h_orbit_distances(t, x, y, delta, c, n, q)
            worst = max(worst, float(dists[q - 1]))
        sups.append(worst)
    return {"candidates": qs, "sup_distances": sups}


# ---------------------------------------------------------------------------
# Birkhoff-average linearization at a unit-modulus fixed point
# ---------------------------------------------------------------------------

def birkhoff_linearize(params, fp, n_values=(1, 4, 16, 64, 256),
                       n_samples=24, ball_radius=1e-3, seed=0):
    """Residual curve of the averaged conjugacy at an affine fixed point.

    In eigencoordinates w at the fixed point, Phi_N = (1/N) sum A^-k h^k;
    the residual r(N) = max over samples |Phi_N(h(w)) - A Phi_N(w)| tends to
    0 when the samples sit in the rotation domain (the orbit stays bounded,
    and the sum telescopes to O(1/N)). Samples whose orbit leaves a guard
    ball are dropped and reported; all dropping is an inconclusive error.

    Hardware precision: A is unitary up to rounding, the orbit is bounded,
    and residuals of interest are ~ ball_radius / N >> 1e-13.
    """
    import random
    rng = random.Random(seed)
    mult = family.multipliers_at_fixed(params, fp)
    if not mult.rank2_criterion:
        raise ValidationError("fixed point fails the rank-2 criterion")

    delta = as_complex(params.delta)
    c = as_complex(params.c)
    fx, fy = as_complex(fp[0]), as_complex(fp[1])
    jac = np.array([[0.0 + 0.0j, 1.0 + 0.0j],
                    [-delta, c - 1.0 / (fy * fy)]])
    evals, evecs = np.linalg.eig(jac)
    pmat = evecs
    pinv = np.linalg.inv(pmat)
    avals = evals

    def h(w):
        z = pmat @ w + np.array([fx, fy])
        img = np.array([z[1], -delta * z[0] + c * z[1] + 1.0 / z[1]])
        return pinv @ (img - np.array([fx, fy]))

    n_max = max(n_values)
    guard = 50.0 * ball_radius
    orbits = []
    dropped = 0
    for _ in range(n_samples):
        w = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                      complex(rng.uniform(-1, 1), rng.uniform(-1, 1))])
        w = w / max(1.0, np.linalg.norm(w) / ball_radius)
        orbit = [w]
        ok = True
        for _ in range(n_max + 1):
            w = h(w)
            if np.linalg.norm(w) > guard:
                ok = False
                break
            orbit.append(w)
        if ok:
            orbits.append(orbit)
        else:
            dropped += 1
    if not orbits:
        raise NumericFailureError("all Birkhoff samples escaped the guard ball")

    apow_inv = [np.array([1.0 + 0.0j, 1.0 + 0.0j])]
    for _ in range(n_max + 1):
        apow_inv.append(apow_inv[-1] / avals)

    residuals = []
    for nval in n_values:
        worst = 0.0
        for orbit in orbits:
            phi_z = np.zeros(2, dtype=complex)
            phi_hz = np.zeros(2, dtype=complex)
            for k in range(nval):
                phi_z += apow_inv[k] * orbit[k]
                phi_hz += apow_inv[k] * orbit[k + 1]
            phi_z /= nval
            phi_hz /= nval
            worst = max(worst, float(np.max(np.abs(phi_hz - avals * phi_z))))
        residuals.append(worst)
    return {
        "n_values": list(n_values),
        "residuals": residuals,
        "dropped_samples": dropped,
        "multipliers": (complex(avals[0]), complex(avals[1])),
    }


# ---------------------------------------------------------------------------
# recurrence rasters
# ---------------------------------------------------------------------------

@dataclass
class RasterGrid:
    """Classification raster over a real 2-plane chart slice."""

    chart: str
    window: tuple            # (x0, x1, y0, y1)
    resolution: tuple        # (width, height)
    budget: int
    eps: float
    candidates: tuple
    classes: object          # uint8 (height, width)
    return_steps: object     # int64 (height, width)

    def counts(self):
        vals, cnts = np.unique(self.classes, return_counts=True)
        base = {"non_recurrent": 0, "indeterminate": 0, "recurrent": 0}
        names = {_kernels.CLASS_NONRECURRENT: "non_recurrent",
                 _kernels.CLASS_INDETERMINATE: "indeterminate",
                 _kernels.CLASS_RECURRENT: "recurrent"}
        for v, ct in zip(vals, cnts):
            base[names[int(v)]] = int(ct)
        return base

    def to_pgm_bytes(self):
        """P5 raster: 255 recurrent, 128 indeterminate-hit, 0 non-recurrent."""
        h, w = self.classes.shape
        lut = np.array([0, 128, 255], dtype=np.uint8)
        body = lut[self.classes].tobytes()
        header = ("P5\n%d %d\n255\n" % (w, h)).encode("ascii")
        return header + body

    def write_pgm(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_pgm_bytes())

    def write_csv(self, path):
        x0, x1, y0, y1 = self.window
        w, h = self.resolution
        us = np.linspace(x0, x1, w)
        vs = np.linspace(y0, y1, h)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["row", "col", "u", "v", "class", "return_step"])
            for r in range(h):
                for cidx in range(w):
                    writer.writerow([r, cidx, repr(us[cidx]), repr(vs[r]),
                                     int(self.classes[r, cidx]),
                                     int(self.return_steps[r, cidx])])


def _chart_states(chart, window, resolution, basepoint=None):
    """Complex homogeneous start coordinates for every grid point.

    Grid points are the inclusive linspace of the window, so a window edge
    at 0 places a full row exactly on the invariant line. Charts:
    "line": (u, v) -> [v : 1 : u] (u along the line, v transverse; the
    row v = 0 is the line itself); "affine": (u, v) -> [1 : b1+u : b2+v].
    """
    x0, x1, y0, y1 = window
    w, h = resolution
    if w < 2 or h < 2:
        raise ValidationError("resolution must be at least 2x2")
    us = np.linspace(x0, x1, w)
    vs = np.linspace(y0, y1, h)
    uu, vv = np.meshgrid(us, vs)
    if chart == "line":
        T = vv.astype(np.complex128)
        X = np.ones_like(T)
        Y = uu.astype(np.complex128)
    elif chart == "affine":
        b1, b2 = (0j, 0j) if basepoint is None else (complex(basepoint[0]),
                                                     complex(basepoint[1]))
        T = np.ones((h, w), dtype=np.complex128)
        X = b1 + uu.astype(np.complex128)
        Y = b2 + vv.astype(np.complex128)
    else:
        raise ValidationError("unknown chart %r" % (chart,))
    return T, X, Y


def siegel_raster(params, chart, window, resolution, budget=None, eps=1e-3,
                  threads=1, basepoint=None):
    """Classify every grid point as recurrent / non-recurrent / indeterminate.

    A point is recurrent when some candidate return time <= budget brings
    the orbit back within eps (projective distance); otherwise it is
    non-recurrent-within-budget -- an honest budgeted statement, no escape
    claim. Deterministic: same window, resolution, budget and eps give
    byte-identical rasters for any thread count (cells are independent pure
    functions).
    """
    if budget is None:
        budget = default_budget(params.lam, params.precision_bits)
    cands = np.array(candidate_times(params.lam, budget,
                                     params.precision_bits), dtype=np.int64)
    T, X, Y = _chart_states(chart, window, resolution, basepoint)
    h, w = T.shape
    delta = as_complex(params.delta)
    c = as_complex(params.c)
    n = params.n

    classes = np.zeros((h, w), dtype=np.uint8)
    steps = np.full((h, w), -1, dtype=np.int64)

    def run_rows(r0, r1):
        cl, st = _kernels.classify_block(
            T[r0:r1].ravel(), X[r0:r1].ravel(), Y[r0:r1].ravel(),
            delta, c, n, cands, eps)
        classes[r0:r1] = cl.reshape(r1 - r0, w)
        steps[r0:r1] = st.reshape(r1 - r0, w)

    threads = max(1, int(threads))
    if threads == 1:
        run_rows(0, h)
    else:
        block = (h + threads - 1) // threads
        spans = [(i * block, min(h, (i + 1) * block))
                 for i in range(threads) if i * block < h]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda sp: run_rows(*sp), spans))

    return RasterGrid(chart=chart, window=tuple(window),
                      resolution=tuple(resolution), budget=int(budget),
                      eps=float(eps), candidates=tuple(int(q) for q in cands),
                      classes=classes, return_steps=steps)


def classify_point_mp(params, point, candidates, eps, precision_bits=None):
    """mpmath mirror of the kernel cell classifier (precision studies).

    Same stepping and distance logic as the hardware kernel, at arbitrary
    precision; used by the precision-doubling stability check.
    """
    bits = precision_bits or params.precision_bits
    with workprec(bits):
        t, x, y = (mpc(v) for v in point)
        d, c = mpc(params.delta), mpc(params.c)
        n = params.n
        start = _safe_norm((t, x, y))
        t, x, y = start
        h = 0
        for target in candidates:
            while h < target:
                for _ in range(n):
                    if abs(t) == 0:
                        nt, nx, ny = mpc(0), y, -d * x + c * y
                    else:
                        nt, nx, ny = t * y, y * y, -d * x * y + c * y * y + t * t
                    if max(abs(nt), abs(nx), abs(ny)) < mpf(10) ** -60:
                        return _kernels.CLASS_INDETERMINATE, h
                    t, x, y = _safe_norm((nt, nx, ny))
                h += 1
            if proj_distance((t, x, y), start) < eps:
                return _kernels.CLASS_RECURRENT, target
        return _kernels.CLASS_NONRECURRENT, -1


# ---------------------------------------------------------------------------
# slice radius along radial leaves
# ---------------------------------------------------------------------------

def slice_radius(params, w, budget=None, eps=1e-3, r_init=1e-3,
                 max_doublings=40, bisections=30):
    """Bracket the recurrent radius along the radial leaf through [0:1:w].

    Probes points [r : 1 : w] for real r > 0 (the domain is circled in the
    leaf coordinate, so the modulus alone matters): r_lo is the largest
    tested radius with all smaller tested radii recurrent, r_hi the
    smallest tested non-recurrent radius. The prediction is a finite
    positive bracket. Deterministic (pure bisection, no sampling).
    """
    if budget is None:
        budget = default_budget(params.lam, params.precision_bits, at_least=2048)
    cands = np.array(candidate_times(params.lam, budget,
                                     params.precision_bits), dtype=np.int64)
    delta = as_complex(params.delta)
    c = as_complex(params.c)
    n = params.n
    wc = complex(w)

    probes = 0

    def recurrent(r):
        nonlocal probes
        probes += 1
        cl, _ = _kernels.classify_point(r, 1.0, wc, delta, c, n, cands, eps)
        return cl == _kernels.CLASS_RECURRENT

    r = float(r_init)
    shrink = 0
    while not recurrent(r):
        r /= 10.0
        shrink += 1
        if shrink > 6:
            return {"r_lo": 0.0, "r_hi": float("inf"), "inconclusive": True,
                    "probes": probes, "budget": int(budget)}
    r_lo = r
    r_hi = None
    for _ in range(max_doublings):
        r *= 2.0
        if not recurrent(r):
            r_hi = r
            break
        r_lo = r
    if r_hi is None:
        return {"r_lo": r_lo, "r_hi": float("inf"), "inconclusive": True,
                "probes": probes, "budget": int(budget)}
    for _ in range(bisections):
        mid = math.sqrt(r_lo * r_hi)
        if recurrent(mid):
            r_lo = mid
        else:
            r_hi = mid
    return {"r_lo": r_lo, "r_hi": r_hi, "inconclusive": False,
            "probes": probes, "budget": int(budget)}
