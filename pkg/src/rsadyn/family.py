"""The automorphism family: parameters, map evaluation, fixed-point calculus.

One member of the family is the birational quadratic map

    f(x, y) = (y, -delta x + c y + 1/y),        c = 2 sqrt(delta) cos(j pi / n)

where delta is a unit-circle, non-root-of-unity root of the degree-nm Salem
polynomial and gcd(j, n) = 1. In homogeneous coordinates

    f[t : x : y] = [t y : y^2 : -delta x y + c y^2 + t^2].

The restriction to the invariant line at infinity {t = 0} is the Moebius map
g(w) = c - delta / w, elliptic of period n; its forward orbit of c vanishes
at step n-1, which is the consistency check validating a (j, sqrt-branch)
pairing.
"""

from dataclasses import dataclass
from math import gcd

from mpmath import arg, cos, exp, mp, mpc, mpf, pi, sqrt, workprec

from . import salem
from .errors import (ConsistencyError, DegenerateParameterError,
                     DivisionDegeneracyError, ExceptionalLocusError,
                     IndeterminatePointError, ValidationError)
from .numeric import (check_precision, mpc_from_json, mpc_to_json,
                      proj_distance, proj_normalize, tolerance_for)


@dataclass(frozen=True)
class FamilyParams:
    """Validated, immutable parameter pack for one family member.

    orbit holds w_1..w_{n-1} with w_s = g^{s-1}(c); orbit_mid is the orbit
    midpoint w_{(n-1)/2} (present only for odd n, where its square is delta).
    lam is the common multiplier of the n-fold return map transverse to the
    line at infinity.
    """

    n: int
    m: int
    j: int
    root_index: int
    sqrt_branch: int
    precision_bits: int
    delta: object
    sqrt_delta: object
    c: object
    lam: object
    orbit: tuple
    orbit_mid: object
    tolerance: object

    def to_json(self):
        bits = self.precision_bits
        return {
            "n": self.n, "m": self.m, "j": self.j,
            "root_index": self.root_index, "sqrt_branch": self.sqrt_branch,
            "precision": bits,
            "delta": mpc_to_json(self.delta, bits),
            "sqrt_delta": mpc_to_json(self.sqrt_delta, bits),
            "c": mpc_to_json(self.c, bits),
            "lambda": mpc_to_json(self.lam, bits),
            "orbit": [mpc_to_json(w, bits) for w in self.orbit],
            "orbit_mid": mpc_to_json(self.orbit_mid, bits)
                         if self.orbit_mid is not None else None,
        }

    @classmethod
    def from_json(cls, data):
        bits = int(data["precision"])
        with workprec(bits):
            return cls(
                n=int(data["n"]), m=int(data["m"]), j=int(data["j"]),
                root_index=int(data["root_index"]),
                sqrt_branch=int(data["sqrt_branch"]),
                precision_bits=bits,
                delta=mpc_from_json(data["delta"], bits),
                sqrt_delta=mpc_from_json(data["sqrt_delta"], bits),
                c=mpc_from_json(data["c"], bits),
                lam=mpc_from_json(data["lambda"], bits),
                orbit=tuple(mpc_from_json(w, bits) for w in data["orbit"]),
                orbit_mid=mpc_from_json(data["orbit_mid"], bits)
                          if data["orbit_mid"] is not None else None,
                tolerance=tolerance_for(bits),
            )


def line_map(params, w):
    """The invariant-line restriction g(w) = c - delta / w."""
    return params.c - params.delta / w


def build_params(n, m, j, root_index=0, sqrt_branch=1, precision_bits=256,
                 certificate=None):
    """Construct and validate a FamilyParams.

    delta is chosen as nonunity_unit_roots[root_index] of the certified
    Salem polynomial (deterministic (argument, modulus) order); sqrt_branch
    selects the sign of sqrt(delta). The pairing of branch and j is not
    guessed: it is validated a posteriori by |w_{n-1}| falling below
    tolerance.
    """
    precision_bits = check_precision(precision_bits)
    if not ((n >= 4 and m >= 1) or (n == 3 and m >= 2)):
        raise ValidationError(
            "need n >= 4 with m >= 1, or n = 3 with m >= 2; got n=%r m=%r" % (n, m))
    if not (0 < j < n):
        raise ValidationError("need 0 < j < n, got j=%r" % (j,))
    if gcd(j, n) != 1:
        raise ValidationError("j must be coprime to n, got gcd(%d, %d) = %d"
                              % (j, n, gcd(j, n)))
    if sqrt_branch not in (1, -1):
        raise ValidationError("sqrt_branch must be +1 or -1")

    if certificate is None:
        certificate = salem.salem_certificate(
            salem.salem_polynomial(n, m), precision_bits)
    candidates = certificate.nonunity_unit_roots
    if not (0 <= root_index < len(candidates)):
        raise ValidationError(
            "root_index %r out of range: %d certified non-root-of-unity "
            "unit-circle roots" % (root_index, len(candidates)))

    with workprec(precision_bits):
        tol = tolerance_for(precision_bits)
        delta = candidates[root_index]
        if abs(delta ** 3 + 1) < tol:
            raise DegenerateParameterError("delta^3 = -1 is outside the family")
        sqrt_delta = sqrt_branch * sqrt(delta)
        c = 2 * sqrt_delta * cos(mpf(j) * pi / n)

        orbit = [c]
        for _ in range(n - 2):
            orbit.append(c - delta / orbit[-1])
        if abs(orbit[-1]) > tol:
            raise ConsistencyError(
                "orbit value w_{n-1} = %s fails to vanish: wrong "
                "(root_index, sqrt_branch, j) pairing" % salem.mp_str(orbit[-1]))

        if n % 2 == 0:
            lam = -delta ** (-(n // 2))
            orbit_mid = None
        else:
            orbit_mid = orbit[(n - 1) // 2 - 1]
            if abs(orbit_mid ** 2 - delta) > tol:
                raise ConsistencyError("orbit midpoint squared differs from delta")
            lam = -1 / (delta ** ((n - 1) // 2) * orbit_mid)

        return FamilyParams(
            n=n, m=m, j=j, root_index=root_index, sqrt_branch=sqrt_branch,
            precision_bits=precision_bits, delta=delta, sqrt_delta=sqrt_delta,
            c=c, lam=lam, orbit=tuple(orbit), orbit_mid=orbit_mid,
            tolerance=tol)


def with_mismatched_c(params, factor):
    """Copy of params with c scaled by `factor` (a deliberate non-member c).

    The orbit recurrence is recomputed without the vanishing check. Used by
    sharpness probes: a non-member c makes the resonant coefficients of the
    corner return map survive, so linearization must report an obstruction.
    """
    with workprec(params.precision_bits):
        c = params.c * mpc(factor)
        orbit = [c]
        for _ in range(params.n - 2):
            if abs(orbit[-1]) < params.tolerance:
                raise DivisionDegeneracyError(
                    "perturbed orbit hit zero", index=len(orbit) - 1)
            orbit.append(c - params.delta / orbit[-1])
        return FamilyParams(
            n=params.n, m=params.m, j=params.j, root_index=params.root_index,
            sqrt_branch=params.sqrt_branch, precision_bits=params.precision_bits,
            delta=params.delta, sqrt_delta=params.sqrt_delta, c=c,
            lam=params.lam, orbit=tuple(orbit), orbit_mid=params.orbit_mid,
            tolerance=params.tolerance)


# ---------------------------------------------------------------------------
# map evaluation
# ---------------------------------------------------------------------------

class ProjectivePoint:
    """Point of the projective plane, stored with largest-|.| coordinate 1."""

    __slots__ = ("t", "x", "y")

    def __init__(self, t, x, y, tol=None):
        coords = (mpc(t), mpc(x), mpc(y))
        if all(abs(cc) == 0 for cc in coords):
            raise ValidationError("projective point needs a nonzero coordinate")
        self.t, self.x, self.y = proj_normalize(coords)

    def coords(self):
        return (self.t, self.x, self.y)

    def distance(self, other):
        return proj_distance(self.coords(), other.coords())

    def approx_equal(self, other, tol):
        return self.distance(other) < tol

    def __repr__(self):
        return "ProjectivePoint[%s : %s : %s]" % (
            salem.mp_str(self.t), salem.mp_str(self.x), salem.mp_str(self.y))


def map_affine(params, z):
    """One step of f(x, y) = (y, -delta x + c y + 1/y)."""
    x, y = mpc(z[0]), mpc(z[1])
    with workprec(params.precision_bits):
        if abs(y) < params.tolerance:
            raise ExceptionalLocusError("y = 0 lies on the exceptional curve")
        return (y, -params.delta * x + params.c * y + 1 / y)


def map_affine_inverse(params, z):
    """One step of f^{-1}(x, y) = ((c x - y + 1/x) / delta, x)."""
    x, y = mpc(z[0]), mpc(z[1])
    with workprec(params.precision_bits):
        if abs(x) < params.tolerance:
            raise ExceptionalLocusError("x = 0 lies on the inverse exceptional curve")
        return ((params.c * x - y + 1 / x) / params.delta, x)


def map_homogeneous(params, point):
    """One step of f[t:x:y] = [t y : y^2 : -delta x y + c y^2 + t^2]."""
    with workprec(params.precision_bits):
        t, x, y = point.coords()
        nt = t * y
        nx = y * y
        ny = -params.delta * x * y + params.c * y * y + t * t
        if max(abs(nt), abs(nx), abs(ny)) < params.tolerance:
            raise IndeterminatePointError(
                "image vanished: point of indeterminacy [0:1:0]")
        return ProjectivePoint(nt, nx, ny)


# ---------------------------------------------------------------------------
# invariant-line orbit and its identities
# ---------------------------------------------------------------------------

def line_orbit(params):
    """Return (orbit values, period report) for the invariant-line Moebius map.

    The report verifies that M = [[0, -delta], [1, c]] has M^n equal to a
    scalar multiple nu of the identity with nu^2 = delta^n, and that the
    Moebius fixed points carry derivative exp(2 pi i j / n).
    """
    with workprec(params.precision_bits):
        d, c = params.delta, params.c
        mat = ((mpc(0), -d), (mpc(1), c))
        power = ((mpc(1), mpc(0)), (mpc(0), mpc(1)))
        for _ in range(params.n):
            power = _mat2_mul(power, mat)
        off = max(abs(power[0][1]), abs(power[1][0]))
        diag_gap = abs(power[0][0] - power[1][1])
        nu = power[0][0]
        nu_residual = abs(nu ** 2 - d ** params.n)

        # derivative of g at its fixed points: delta / w_fix^2
        disc = sqrt(c * c - 4 * d)
        rot = exp(2j * pi * params.j / params.n)
        deriv_residuals = []
        for sign in (1, -1):
            wfix = (c + sign * disc) / 2
            deriv = d / (wfix * wfix)
            deriv_residuals.append(min(abs(deriv - rot), abs(deriv - 1 / rot)))

        scale = max(abs(power[0][0]), abs(power[1][1]))
        report = {
            "off_diagonal": off / scale,
            "diagonal_gap": diag_gap / scale,
            "nu_squared_residual": nu_residual,
            "fixed_point_derivative_residual": max(deriv_residuals),
        }
        if off / scale > params.tolerance or diag_gap / scale > params.tolerance:
            raise ConsistencyError(
                "M^n is not a scalar matrix (off-diagonal %s)" % salem.mp_str(off))
        return params.orbit, report


def _mat2_mul(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0],
             a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0],
             a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def orbit_identities(params):
    """Residuals of the pairing and product identities of the line orbit.

    Checks w_j w_{n-1-j} = delta for 1 <= j <= n-2, and the product
    w_1 ... w_{n-2} = delta^((n-2)/2) for even n, or delta^((n-3)/2) w_mid
    with w_mid^2 = delta for odd n.
    """
    with workprec(params.precision_bits):
        n, d = params.n, params.delta
        w = params.orbit
        pair_res = mpf(0)
        for jj in range(1, n - 1):
            pair_res = max(pair_res, abs(w[jj - 1] * w[n - 1 - jj - 1] - d))
        prod = mpc(1)
        for jj in range(1, n - 1):
            prod *= w[jj - 1]
        if n % 2 == 0:
            prod_res = abs(prod - d ** ((n - 2) // 2))
            mid_res = mpf(0)
        else:
            prod_res = abs(prod - d ** ((n - 3) // 2) * params.orbit_mid)
            mid_res = abs(params.orbit_mid ** 2 - d)
        return {
            "pairing_residual": pair_res,
            "product_residual": prod_res,
            "midpoint_residual": mid_res,
            "max_residual": max(pair_res, prod_res, mid_res),
        }


def orbit_telescoping(params, k):
    """Residual of the telescoped expansion of the k-th line-orbit iterate.

    With g_i = g^i(c) (so g_0 = c and g_i = w_{i+1}), the iterate satisfies

        g_k = c - d/c - d^2/(c^2 g_1) - ... - d^k/(c^2 g_1^2...g_{k-2}^2 g_{k-1})

    valid for 1 <= k <= n-2; increments obey
    g_k - g_{k-1} = -d^k / (g_0^2 g_1^2 ... g_{k-2}^2 g_{k-1}).
    """
    n = params.n
    if not 1 <= k <= n - 2:
        raise ValidationError("telescoping needs 1 <= k <= n-2")
    with workprec(params.precision_bits):
        d, c = params.delta, params.c
        g = [c] + list(params.orbit[1:])  # g[i] = g^i(c)
        for i in range(k):
            if abs(g[i]) < params.tolerance:
                raise DivisionDegeneracyError(
                    "denominator g_%d vanished" % i, index=i)
        total = c
        denom = mpc(1)
        for i in range(1, k + 1):
            # denominator g_0^2 g_1^2 ... g_{i-2}^2 g_{i-1}
            denom = denom * (g[i - 2] if i >= 2 else 1) * g[i - 1]
            total -= d ** i / denom
        return abs(total - g[k])


# ---------------------------------------------------------------------------
# fixed points and multipliers
# ---------------------------------------------------------------------------

def fixed_points(params):
    """The two isolated affine fixed points (y, y), y = +-(1+delta-c)^(-1/2)."""
    with workprec(params.precision_bits):
        base = 1 + params.delta - params.c
        if abs(base) < params.tolerance:
            raise DegenerateParameterError("1 + delta - c = 0 is degenerate")
        y = 1 / sqrt(base)
        return ((y, y), (-y, -y))


@dataclass(frozen=True)
class MultiplierData:
    """Multipliers of the differential at an affine fixed point."""

    fixed_point: tuple
    lambda1: object
    lambda2: object
    unit_modulus: bool
    rank2_criterion: bool
    jacobian_residual: object

    def to_json(self, bits):
        return {
            "fixed_point": [mpc_to_json(z, bits) for z in self.fixed_point],
            "lambda1": mpc_to_json(self.lambda1, bits),
            "lambda2": mpc_to_json(self.lambda2, bits),
            "unit_modulus": self.unit_modulus,
            "rank2_criterion": self.rank2_criterion,
            "jacobian_residual": salem.mp_str(self.jacobian_residual),
        }


def multipliers_at_fixed(params, fp):
    """Closed-form multipliers at an affine fixed point, Jacobian cross-checked.

    lambda_{1,2} = -((1+delta)/2 - c) +- sqrt(-delta + ((1+delta)/2 - c)^2);
    the product is delta. The same values must match the eigenvalues of the
    analytic Jacobian [[0, 1], [-delta, c - 1/y^2]] evaluated at the point.
    The rank-2 criterion is |Re sqrt(delta) - 2 cos(j pi/n)| <= 1 with the
    chosen square-root branch.
    """
    with workprec(params.precision_bits):
        d, c = params.delta, params.c
        x, y = mpc(fp[0]), mpc(fp[1])
        img = map_affine(params, (x, y))
        if max(abs(img[0] - x), abs(img[1] - y)) > 1000 * params.tolerance:
            raise ValidationError("supplied point is not fixed")

        half = (1 + d) / 2 - c
        root = sqrt(-d + half * half)
        lam1 = -half + root
        lam2 = -half - root

        # analytic Jacobian, numerically evaluated, eigenvalues by the
        # quadratic formula; matched to the closed form by proximity
        tr = c - 1 / (y * y)
        disc = sqrt(tr * tr - 4 * d)
        e1 = (tr + disc) / 2
        e2 = (tr - disc) / 2
        res = min(max(abs(e1 - lam1), abs(e2 - lam2)),
                  max(abs(e1 - lam2), abs(e2 - lam1)))
        if res > tolerance_for(params.precision_bits // 2):
            raise ConsistencyError(
                "Jacobian eigenvalues disagree with closed-form multipliers "
                "by %s" % salem.mp_str(res))

        unit = (abs(abs(lam1) - 1) < params.tolerance ** mpf("0.25")
                and abs(abs(lam2) - 1) < params.tolerance ** mpf("0.25"))
        crit = abs(mpf(params.sqrt_delta.real)
                   - 2 * cos(mpf(params.j) * pi / params.n)) <= 1
        return MultiplierData(
            fixed_point=(x, y), lambda1=lam1, lambda2=lam2,
            unit_modulus=bool(unit), rank2_criterion=bool(crit),
            jacobian_residual=res)


def multiplicative_relation_search(lam1, lam2, bound, tol, precision_bits=256):
    """Smallest nonzero integer pair (p1, p2) with |lam1^p1 lam2^p2 - 1| < tol.

    Both inputs must have modulus 1 within tolerance. Pairs are enumerated in
    increasing |p1| + |p2| with the canonical sign (p1 > 0, or p1 = 0 and
    p2 > 0); relations come in +- pairs so the canonical representative is
    unique. Returns None when no relation exists within the bound: the
    falsification harness for multiplicative independence of the family's
    fixed-point multipliers.
    """
    with workprec(precision_bits):
        l1, l2 = mpc(lam1), mpc(lam2)
        for lam in (l1, l2):
            if abs(abs(lam) - 1) > mpf(10) ** (-10):
                raise ValidationError("relation search expects unit-modulus inputs")
        th1 = arg(l1) / (2 * pi)
        th2 = arg(l2) / (2 * pi)
        tol = mpf(tol)
        for norm in range(1, 2 * bound + 1):
            for p1 in range(0, min(norm, bound) + 1):
                p2abs = norm - p1
                if p2abs > bound:
                    continue
                choices = [p2abs] if p2abs == 0 else [p2abs, -p2abs]
                for p2 in choices:
                    if p1 == 0 and p2 <= 0:
                        continue
                    frac = th1 * p1 + th2 * p2
                    frac = frac - mp.floor(frac + mpf("0.5"))
                    if abs(2 * mp.sin(pi * frac)) < tol:
                        return (p1, p2)
    return None
