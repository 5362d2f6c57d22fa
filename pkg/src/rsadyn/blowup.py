"""Blowup combinatorics: fiber charts, landing criterion, multiplier calculus.

The surface carrying the automorphism is built from the projective plane by
three levels of blowups over the invariant line at infinity. Level-1 fibers
E1_s sit over the orbit points of [0:0:1]; level-2 fibers E2_s over the
points where that orbit meets the contracted-line directions; level-3 fibers
over the nm-step orbit of the exceptional curve {y=0} through the level-2
fibers. This module implements the induced maps in the explicit fiber
charts, the exact landing criterion selecting the family polynomial's roots,
the marked-orbit pattern check, and the multiplier bookkeeping of the
diagonal linear model.

Chart conventions (pi = blowdown to the plane):
  level 1, s = 0:        pi(s1, e1)_0 = [s1 : s1*e1 : 1]
  level 1, 1 <= s <= n-1: pi(s1, e1)_s = [s1 : 1 : s1*e1 + w_s]
  level 2:                (s1, e1) = (xi*x2, x2), fiber = {x2 = 0}
where w_s are the invariant-line orbit values (w_{n-1} = 0).
"""

from dataclasses import dataclass, field

from mpmath import mpc, mpf, workprec

from . import salem
from .errors import (ChartEscapeError, ConsistencyError,
                     IndeterminatePointError, NumericFailureError,
                     PatternViolationError, ValidationError)
from .numeric import check_precision, mpc_to_json, proj_distance, tolerance_for


# ---------------------------------------------------------------------------
# landing criterion
# ---------------------------------------------------------------------------

def landing_condition(n, m, delta, precision_bits=256):
    """Projective residual of the exceptional-orbit landing criterion.

    The orbit of the contracted line re-enters the level-2 fiber cycle m
    times; it lands on the point of indeterminacy exactly when

        (M1^(n-2) M2^2)^m (1, 0)^T  is parallel to  (delta, 1)^T,

    with M1 = [[1,0],[1,delta]], M2 = [[1,0],[1,-delta]]. The returned
    residual is the projective distance between the two vectors; it vanishes
    (to tolerance) iff delta is a root of the degree-nm family polynomial.
    """
    if n < 3 or m < 1:
        raise ValidationError("landing criterion needs n >= 3, m >= 1")
    precision_bits = check_precision(precision_bits)
    with workprec(precision_bits):
        d = mpc(delta)
        m1 = ((mpc(1), mpc(0)), (mpc(1), d))
        m2 = ((mpc(1), mpc(0)), (mpc(1), -d))
        cycle = _mat_pow(m1, n - 2)
        cycle = _mat_mul(cycle, _mat_mul(m2, m2))
        total = _mat_pow(cycle, m)
        v = (total[0][0], total[1][0])          # total @ (1, 0)^T
        if max(abs(v[0]), abs(v[1])) < tolerance_for(precision_bits):
            raise NumericFailureError("landing vector collapsed to zero")
        return proj_distance(v, (d, mpc(1)))


def _mat_mul(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0],
             a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0],
             a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def _mat_pow(m, k):
    out = ((mpc(1), mpc(0)), (mpc(0), mpc(1)))
    base = m
    while k:
        if k & 1:
            out = _mat_mul(out, base)
        base = _mat_mul(base, base)
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# fiber chart maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberChartPoint:
    """A point in one of the exceptional-fiber charts.

    level 1 uses coordinates (s1, e1)_s: the fiber is {s1 = 0} with fiber
    coordinate e1. level 2 uses (xi, x2)_s: the fiber is {x2 = 0} with fiber
    coordinate xi, and {xi = 0} is the level-1 fiber's strict transform.
    """

    level: int
    s: int
    coords: tuple


def _omega(params, s):
    # orbit[s-1] = w_s for 1 <= s <= n-1; w_{n-1} is the vanishing endpoint
    return params.orbit[s - 1]


def fiber_map_level1(params, pt):
    """Induced map on the level-1 charts, fiber s to fiber s+1 (mod n).

    On-fiber restriction: e1 -> -delta e1 (s=0), e1 -> delta e1 / w_s
    (1 <= s <= n-2), e1 -> e1 (s = n-1); the full chart maps extend these
    off the fiber.
    """
    if pt.level != 1:
        raise ValidationError("level-1 chart point required")
    n = params.n
    s = pt.s % n
    with workprec(params.precision_bits):
        s1, e1 = mpc(pt.coords[0]), mpc(pt.coords[1])
        d, c = params.delta, params.c
        tol = params.tolerance
        if s == 0:
            out = (s1, -d * e1 + s1)
        elif s <= n - 2:
            w = _omega(params, s)
            den = s1 * e1 + w
            if abs(den) < tol:
                raise ChartEscapeError("level-1 chart denominator vanished",
                                       coordinate=den)
            out = (s1 / den, d * e1 / w + s1 / den)
        else:
            den = -d * e1 + c * s1 * e1 * e1 + s1
            if abs(den) < tol:
                raise ChartEscapeError("level-1 chart left its domain near the "
                                       "level-2 center", coordinate=den)
            out = (s1 * e1 / den, e1)
        return FiberChartPoint(level=1, s=(s + 1) % n, coords=out)


def fiber_map_level2(params, pt):
    """Induced map on the level-2 charts, fiber s to fiber s+1 (mod n).

    On the fiber (x2 = 0) the restriction is the Moebius family
    xi -> xi/(xi - delta) for s in {0, n-1} and xi -> xi/(xi + delta)
    otherwise.
    """
    if pt.level != 2:
        raise ValidationError("level-2 chart point required")
    n = params.n
    s = pt.s % n
    with workprec(params.precision_bits):
        xi, x2 = mpc(pt.coords[0]), mpc(pt.coords[1])
        d, c = params.delta, params.c
        tol = params.tolerance
        if s == 0:
            den = xi - d
            if abs(den) < tol:
                raise IndeterminatePointError("level-2 chart denominator vanished")
            out = (xi / den, x2 * (-d + xi))
        elif s <= n - 2:
            w = _omega(params, s)
            den = d * x2 * x2 * xi + w * (xi + d)
            den2 = w * (w + x2 * x2 * xi)
            if abs(den) < tol or abs(den2) < tol:
                raise IndeterminatePointError("level-2 chart denominator vanished")
            out = (w * xi / den, x2 * den / den2)
        else:
            den = xi - d + c * x2 * x2 * xi
            if abs(den) < tol:
                raise IndeterminatePointError("level-2 chart denominator vanished")
            out = (xi / den, x2)
        return FiberChartPoint(level=2, s=(s + 1) % n, coords=out)


# ---------------------------------------------------------------------------
# marked-orbit pattern verification
# ---------------------------------------------------------------------------

def fiber_orbit_check(params, points_per_fiber=10, seed=0):
    """Track marked points through the charts and verify the orbit pattern.

    Checks, with residuals reported: (a) the level-1 and level-2 fiber
    cycles close after n steps, the level-1 on-fiber composite being
    multiplication by 1/lambda; (b) the exceptional curve {y=0} enters the
    level-2 cycle at fiber coordinate 1 and lands after nm steps on the
    inverse-exceptional point (delta, 0) on fiber n-1; (c) the contracted
    curve's first image direction matches delta * x / t; (d) the final step
    onto the inverse-exceptional line has a nonvanishing Jacobian (local
    diffeomorphism).
    """
    import random
    rng = random.Random(seed)
    n, m = params.n, params.m
    with workprec(params.precision_bits):
        d, c, lam = params.delta, params.c, params.lam
        tol = params.tolerance
        check_tol = tolerance_for(params.precision_bits // 2)
        report = {}

        # (a) level-1 cycle: n steps return to the start fiber; on-fiber
        # coordinate is multiplied by 1/lambda
        worst = mpf(0)
        for _ in range(points_per_fiber):
            e = mpc(rng.uniform(0.25, 2.0), rng.uniform(-1.0, 1.0))
            pt = FiberChartPoint(level=1, s=0, coords=(mpc(0), e))
            for _ in range(n):
                pt = fiber_map_level1(params, pt)
            if pt.s != 0 or abs(pt.coords[0]) > tol:
                raise PatternViolationError("level-1 cycle left the fiber", step=n)
            worst = max(worst, abs(pt.coords[1] - e / lam))
        report["level1_cycle_residual"] = worst
        if worst > check_tol:
            raise PatternViolationError(
                "level-1 on-fiber composite is not 1/lambda "
                "(residual %s)" % salem.mp_str(worst))

        # transverse factor of the n-step differential along the level-1
        # cycle equals lambda: product of per-step d(s1')/d(s1) on the fiber
        factor = mpc(1)
        for s in range(n):
            if s == 0:
                factor *= 1
            elif s <= n - 2:
                factor *= 1 / _omega(params, s)
            else:
                factor *= -1 / d
        report["level1_transverse_residual"] = abs(factor - lam)
        if abs(factor - lam) > check_tol:
            raise PatternViolationError("level-1 transverse factor is not lambda")

        # (a') level-2 cycle closes: on-fiber points return to the start fiber
        for _ in range(points_per_fiber):
            xi = mpc(rng.uniform(0.25, 2.0), rng.uniform(-1.0, 1.0))
            pt = FiberChartPoint(level=2, s=0, coords=(xi, mpc(0)))
            for _ in range(n):
                pt = fiber_map_level2(params, pt)
            if pt.s != 0 or abs(pt.coords[1]) > tol:
                raise PatternViolationError("level-2 cycle left the fiber", step=n)
        report["level2_cycle_closed"] = True

        # (b) exceptional-curve chain: fiber coordinate orbit from 1 on fiber
        # 0 reaches delta on fiber n-1 after nm-1 steps
        pt = FiberChartPoint(level=2, s=0, coords=(mpc(1), mpc(0)))
        for step in range(n * m - 1):
            pt = fiber_map_level2(params, pt)
        if pt.s != (n - 1) % n:
            raise PatternViolationError("exceptional chain ended on fiber %d, "
                                        "expected %d" % (pt.s, n - 1))
        landing_res = abs(pt.coords[0] - d)
        report["chain_landing_residual"] = landing_res
        if landing_res > check_tol:
            raise PatternViolationError(
                "exceptional chain missed the inverse-exceptional point "
                "(residual %s)" % salem.mp_str(landing_res), step=n * m - 1)

        # (c) contracted-line image direction: for [1 : x : y], y -> 0, the
        # level-2 entry point satisfies (xi - 1)/x2 -> delta x
        y = mpf(2) ** (-(params.precision_bits // 3))
        worst3 = mpf(0)
        for x in (mpf("0.5"), mpf(1), mpf(2)):
            xi = 1 / (1 - d * x * y + c * y * y)
            direction = (xi - 1) / y
            worst3 = max(worst3, abs(direction - d * x))
        report["entry_direction_residual"] = worst3
        if worst3 > mpf(2) ** (-(params.precision_bits // 4)):
            raise PatternViolationError("contracted-line entry direction "
                                        "mismatch")

        # (d) last step to the inverse-exceptional line: in coordinates
        # (u, v) = (1 - delta/xi + c x2^2, x2) around (delta, 0) the Jacobian
        # determinant is 1/delta != 0
        h = mpf(2) ** (-(params.precision_bits // 3))
        du_dxi = (1 - d / (d + h)) / h      # u(delta, 0) = 0
        jac = du_dxi                        # dv/dx2 = 1, off-diagonal vanishes
        report["last_step_jacobian"] = abs(jac)
        report["last_step_jacobian_residual"] = abs(du_dxi - 1 / d)
        if abs(jac) < check_tol:
            raise PatternViolationError("final step is not a local diffeomorphism")

        return report


# ---------------------------------------------------------------------------
# multiplier calculus of the diagonal model
# ---------------------------------------------------------------------------

def blowup_multipliers(parent):
    """Multipliers at the two fixed points created by blowing up a fixed point.

    For parent multipliers (v1, v2) along invariant directions (C1, C2), the
    exceptional fiber P carries fixed points C1^P and C2^P with multipliers
    (v1, v2/v1) and (v2, v1/v2): along the old curve first, along P second.
    """
    v1, v2 = parent
    if v1 == 0 or v2 == 0:
        raise ValidationError("blowup multipliers must be nonzero")
    return ((v1, v2 / v1), (v2, v1 / v2))


@dataclass
class MultiplierNode:
    """Node of the blowup multiplier tree.

    mult_along is the multiplier along the exceptional fiber created at this
    node's blowup (for leaves of interest), mult_normal the one transverse
    to it; exp_along/exp_normal carry the same data symbolically as integer
    powers of lambda.
    """

    label: str
    exp_along: int
    exp_normal: int
    mult_along: object
    mult_normal: object
    children: list = field(default_factory=list)

    def to_json(self, bits):
        return {
            "label": self.label,
            "exp_along": self.exp_along,
            "exp_normal": self.exp_normal,
            "mult_along": mpc_to_json(mpc(self.mult_along), bits),
            "mult_normal": mpc_to_json(mpc(self.mult_normal), bits),
            "children": [ch.to_json(bits) for ch in self.children],
        }

    def find(self, label):
        if self.label == label:
            return self
        for ch in self.children:
            got = ch.find(label)
            if got is not None:
                return got
        return None


def build_linear_model(params):
    """Three-level multiplier tree of the diagonal model over a line point.

    The scalar model fixes the line at infinity pointwise with transverse
    multiplier lambda, so the base fixed-point data is (1, lambda). Repeated
    blowups of the fixed point on the radial line produce, at the corner of
    the level-1 and level-2 fibers, multipliers {lambda^2, 1/lambda} - which
    must agree with the nonlinear return map's differential there (the
    product of the level-2 chart differentials along the cycle). The deeper
    corner carries {lambda^3, lambda^-2}.
    """
    with workprec(params.precision_bits):
        lam = params.lam
        n = params.n

        def node(label, e_along, e_normal):
            return MultiplierNode(label=label, exp_along=e_along,
                                  exp_normal=e_normal,
                                  mult_along=lam ** e_along,
                                  mult_normal=lam ** e_normal)

        # base point on the invariant line: multipliers (1, lambda) along
        # (line, radial) directions
        root = node("line_point", 0, 1)
        # blow up: fiber E1; children at line^E1 and ray^E1
        p_node = node("line_x_e1", 1, 0)     # along fiber lambda, along line 1
        ray1 = node("ray_x_e1", -1, 1)       # along fiber 1/lambda, along ray lambda
        root.children = [p_node, ray1]
        # blow up ray^E1: fiber E2
        corner = node("e1_x_e2", 2, -1)      # along E2 lambda^2, along E1 1/lambda
        ray2 = node("ray_x_e2", -2, 1)       # along E2 lambda^-2, along ray lambda
        ray1.children = [corner, ray2]
        # blow up ray^E2: fiber E3
        deep = node("e2_x_e3", 3, -2)        # along E3 lambda^3, along E2 lambda^-2
        ray3 = node("ray_x_e3", -3, 1)
        ray2.children = [deep, ray3]

        # exponent bookkeeping must agree with the generic blowup rule:
        # blowing up a point with multipliers (v1, v2) creates fixed points
        # carrying (v1, v2/v1) and (v2, v1/v2) along (old curve, new fiber)
        for parent, c1, c2 in ((root, p_node, ray1),
                               (ray1, corner, ray2),
                               (ray2, deep, ray3)):
            a1, a2 = parent.exp_along, parent.exp_normal
            want = {(a2 - a1, a1), (a1 - a2, a2)}    # (along fiber, normal)
            got = {(c.exp_along, c.exp_normal) for c in (c1, c2)}
            if got != want:
                raise ConsistencyError(
                    "multiplier tree exponents violate the blowup rule at %s"
                    % parent.label)

        # corner cross-check against the nonlinear side: the product of the
        # level-2 chart differentials along the n-step cycle is
        # diag(delta^-n, -delta^(n-1)/(w_1...w_{n-2})) = diag(lambda^2, 1/lambda)
        d = params.delta
        xi_factor = (-1 / d) * (1 / d) ** (n - 2) * (-1 / d)
        x_factor = -d
        for s in range(1, n - 1):
            x_factor *= d / _omega(params, s)
        res_xi = abs(xi_factor - corner.mult_along)
        res_x = abs(x_factor - corner.mult_normal)
        check_tol = tolerance_for(params.precision_bits // 2)
        if res_xi > check_tol or res_x > check_tol:
            raise ConsistencyError(
                "corner multipliers disagree with the chart-differential "
                "product: (%s, %s)" % (salem.mp_str(res_xi), salem.mp_str(res_x)))

        # determinant consistency at the corner: product of multipliers = lambda
        if abs(corner.mult_along * corner.mult_normal - lam) > check_tol:
            raise ConsistencyError("corner multiplier product is not lambda")

        return root


def cycle_moebius_invariants(params):
    """Invariants of the composed level-2 on-fiber Moebius cycle.

    Returns the trace-squared-over-determinant invariant of the n-step
    composite together with its on-fiber derivatives at the two fixed points
    xi = 0 and xi = infinity; these equal lambda^2 and lambda^-2 (matching
    the multiplier tree), and tr^2/det = lambda^2 + 2 + lambda^-2.
    """
    with workprec(params.precision_bits):
        d, lam = params.delta, params.lam
        n = params.n
        m_minus = ((mpc(1), mpc(0)), (mpc(1), -d))   # xi -> xi/(xi - delta)
        m_plus = ((mpc(1), mpc(0)), (mpc(1), d))     # xi -> xi/(xi + delta)
        comp = m_minus                                # step s = 0
        comp = _mat_mul(_mat_pow(m_plus, n - 2), comp)
        comp = _mat_mul(m_minus, comp)                # step s = n-1
        tr = comp[0][0] + comp[1][1]
        det = comp[0][0] * comp[1][1] - comp[0][1] * comp[1][0]
        invariant = tr * tr / det
        # derivative at xi=0 for [[a,b],[c,e]] acting as (a xi + b)/(c xi + e):
        # b = 0 here, so phi'(0) = a/e and phi'(inf) = e/a
        deriv0 = comp[0][0] / comp[1][1]
        derivinf = comp[1][1] / comp[0][0]
        return {
            "trace_sq_over_det": invariant,
            "invariant_residual": abs(invariant - (lam ** 2 + 2 + lam ** -2)),
            "deriv_at_zero": deriv0,
            "deriv_at_zero_residual": abs(deriv0 - lam ** 2),
            "deriv_at_infinity": derivinf,
            "deriv_at_infinity_residual": abs(derivinf - lam ** -2),
        }
