"""Truncated bivariate series, resonance bookkeeping, and linearization.

Series are dicts (i, j) -> coefficient over arbitrary-precision complex
numbers, truncated at a total degree; absent keys are zero. The return maps
of the automorphism at its distinguished fixed points are built by
composing the explicit fiber-chart maps with geometric-series expansion of
every denominator; the conjugacy to the diagonal linear part is solved
order by order, dividing each coefficient by eta1^i eta2^j - eta_k and
treating exactly-resonant monomials by the vanishing-forcing/obstruction
dichotomy.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpc, mpf, workprec

from .errors import (CompositionDomainError, ConsistencyError,
                     PropertyViolationError, StructureViolationError,
                     ValidationError)
from .numeric import mpc_to_json, tolerance_for


class BivariateSeries:
    """Truncated power series in two variables with mpc coefficients."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, trunc, coeffs=None):
        self.trunc = int(trunc)
        self.coeffs = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if i + j <= self.trunc and v != 0:
                    self.coeffs[(i, j)] = mpc(v)

    @classmethod
    def zero(cls, trunc):
        return cls(trunc)

    @classmethod
    def constant(cls, trunc, value):
        return cls(trunc, {(0, 0): mpc(value)})

    @classmethod
    def variable(cls, trunc, which):
        key = (1, 0) if which == 0 else (0, 1)
        return cls(trunc, {key: mpc(1)})

    def __getitem__(self, key):
        return self.coeffs.get(key, mpc(0))

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0][0] + kv[0][1],
                                                           kv[0]))

    def copy(self):
        out = BivariateSeries(self.trunc)
        out.coeffs = dict(self.coeffs)
        return out

    def __add__(self, other):
        if not isinstance(other, BivariateSeries):
            other = BivariateSeries.constant(self.trunc, other)
        out = BivariateSeries(min(self.trunc, other.trunc))
        keys = set(self.coeffs) | set(other.coeffs)
        for k in sorted(keys):
            if k[0] + k[1] > out.trunc:
                continue
            v = self[k] + other[k]
            if v != 0:
                out.coeffs[k] = v
        return out

    def __neg__(self):
        out = BivariateSeries(self.trunc)
        out.coeffs = {k: -v for k, v in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            out = BivariateSeries(self.trunc)
            if other != 0:
                out.coeffs = {k: v * other for k, v in self.coeffs.items()}
            return out
        out = BivariateSeries(min(self.trunc, other.trunc))
        acc = {}
        for (i1, j1), v1 in self.items_sorted():
            if i1 + j1 > out.trunc:
                continue
            for (i2, j2), v2 in other.items_sorted():
                i, j = i1 + i2, j1 + j2
                if i + j > out.trunc:
                    continue
                key = (i, j)
                acc[key] = acc.get(key, mpc(0)) + v1 * v2
        out.coeffs = {k: v for k, v in sorted(acc.items()) if v != 0}
        return out

    __rmul__ = __mul__

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=mpf(0))

    def drop_below(self, floor):
        """Remove coefficients with |c| < floor (analytic-zero cleanup)."""
        out = BivariateSeries(self.trunc)
        out.coeffs = {k: v for k, v in self.coeffs.items() if abs(v) >= floor}
        return out

    def to_json(self, bits):
        return {"%d,%d" % k: mpc_to_json(v, bits)
                for k, v in self.items_sorted()}

    def __repr__(self):
        return "BivariateSeries(trunc=%d, nterms=%d)" % (self.trunc,
                                                         len(self.coeffs))


def series_add(f, g):
    return f + g


def series_mul(f, g):
    return f * g


def inverse_unit(f):
    """1/f for a series with nonzero constant term, via geometric expansion.

    1/(c(1 + u)) = (1/c) sum (-u)^k truncated at the series degree; purely
    formal, no convergence claim.
    """
    c = f[(0, 0)]
    if c == 0:
        raise CompositionDomainError("cannot invert a series with zero "
                                     "constant term")
    u = (f * (1 / c))
    u.coeffs.pop((0, 0), None)
    out = BivariateSeries.constant(f.trunc, 1)
    term = BivariateSeries.constant(f.trunc, 1)
    sign = -1
    for _ in range(f.trunc):
        term = term * u
        if not term.coeffs:
            break
        out = out + term * mpc(sign)
        sign = -sign
    return out * (1 / c)


def series_compose(f, g_pair):
    """f(g1, g2) for series g1, g2 with zero constant term."""
    g1, g2 = g_pair
    for g in (g1, g2):
        if g[(0, 0)] != 0:
            raise CompositionDomainError(
                "composition target has nonzero constant term")
    trunc = min(f.trunc, g1.trunc, g2.trunc)
    pow1 = [BivariateSeries.constant(trunc, 1)]
    pow2 = [BivariateSeries.constant(trunc, 1)]
    for _ in range(trunc):
        pow1.append(pow1[-1] * g1)
        pow2.append(pow2[-1] * g2)
    out = BivariateSeries(trunc)
    for (i, j), v in f.items_sorted():
        if i + j > trunc:
            continue
        out = out + (pow1[i] * pow2[j]) * v
    return out


def compose_pair(f_pair, g_pair):
    return (series_compose(f_pair[0], g_pair), series_compose(f_pair[1], g_pair))


# ---------------------------------------------------------------------------
# resonance classes of monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResonanceClass:
    """Primitive multiplicative relation eta1^a eta2^b = 1, a, b > 0 coprime."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValidationError("resonance exponents must be positive")
        if math.gcd(self.a, self.b) != 1:
            raise ValidationError("resonance exponents must be coprime")

    def validate(self, eta1, eta2, tol):
        if abs(mpc(eta1) ** self.a * mpc(eta2) ** self.b - 1) >= tol:
            raise ValidationError("eta1^a eta2^b is not 1 within tolerance")
        return self

    def resonant_for(self, i, j, k):
        """Exact test: eta^(i,j) = eta_k forced by the relation lattice.

        With (a, b) primitive and the etas otherwise independent, the
        relation group is generated by (a, b); so the divisor vanishes
        exactly when (i, j) - e_k is a positive multiple of (a, b).
        """
        if k == 1:
            di, dj = i - 1, j
        else:
            di, dj = i, j - 1
        if di < 0 or dj < 0:
            return False
        if di * self.b != dj * self.a:
            return False
        mult = di // self.a if self.a else dj // self.b
        return mult >= 1 and (di, dj) == (mult * self.a, mult * self.b)


MONOMIAL_MAIN = "main"            # strictly above the resonant line
MONOMIAL_UPPER = "upper-only"     # in the closed upper region, not main
MONOMIAL_RESONANT = "resonant-line"
MONOMIAL_OUTSIDE = "outside"


def classify_monomial(i, j, rc, k=1):
    """Place the monomial x^i y^j relative to the coordinate-k regions.

    For k = 1 (ratio r = a/b): main region i > r j + 1 strictly; upper
    region i >= r (j - 1); resonant line i = r j + 1 with j >= 1. For k = 2
    the roles of the exponents and of a, b swap.
    """
    if i < 0 or j < 0:
        raise ValidationError("exponents must be nonnegative")
    if k == 1:
        r = Fraction(rc.a, rc.b)
        main = Fraction(i) > r * j + 1
        upper = Fraction(i) >= r * (j - 1)
        resonant = (Fraction(i) == r * j + 1) and j >= 1
    elif k == 2:
        r = Fraction(rc.b, rc.a)
        main = Fraction(j) > r * i + 1
        upper = Fraction(j) >= r * (i - 1)
        resonant = (Fraction(j) == r * i + 1) and i >= 1
    else:
        raise ValidationError("k must be 1 or 2")
    if resonant:
        return MONOMIAL_RESONANT
    if main:
        return MONOMIAL_MAIN
    if upper:
        return MONOMIAL_UPPER
    return MONOMIAL_OUTSIDE


def closure_property_check(rc, k=1, samples=200, seed=0, degree_cap=18):
    """Sampled verification of the multiplicative closure laws.

    Checks on random monomials: products of p main-region elements satisfy
    the bound shifted by p; products of p upper-region elements satisfy the
    bound relaxed by p; and the binomial memberships of mixed powers
    (x + main)^(j1) (y + upper)^(j2). Raises PropertyViolationError with a
    witness on any failure.
    """
    import random
    rng = random.Random(seed)
    if k != 1:
        raise ValidationError("closure check implemented on coordinate 1; "
                              "coordinate 2 is the mirror image")
    r = Fraction(rc.a, rc.b)

    def sample_main():
        while True:
            j = rng.randrange(0, degree_cap)
            lo = r * j + 1
            i = rng.randrange(int(lo) + 1, int(lo) + 6)
            if Fraction(i) > lo:
                return (i, j)

    def sample_upper():
        while True:
            j = rng.randrange(0, degree_cap)
            lo = r * (j - 1)
            i = rng.randrange(max(0, math.ceil(lo)), max(1, math.ceil(lo)) + 6)
            if Fraction(i) >= lo:
                return (i, j)

    checked = {"main_power": 0, "upper_power": 0, "mixed_main": 0,
               "mixed_upper": 0}
    for _ in range(samples):
        p = rng.randrange(1, 5)
        acc = (0, 0)
        for _ in range(p):
            mi, mj = sample_main()
            acc = (acc[0] + mi, acc[1] + mj)
        if not Fraction(acc[0]) > r * acc[1] + p:
            raise PropertyViolationError("main-region power bound failed",
                                         witness=(acc, p))
        checked["main_power"] += 1

        acc = (0, 0)
        for _ in range(p):
            ui, uj = sample_upper()
            acc = (acc[0] + ui, acc[1] + uj)
        if not Fraction(acc[0]) >= r * (acc[1] - p):
            raise PropertyViolationError("upper-region power bound failed",
                                         witness=(acc, p))
        checked["upper_power"] += 1

        # mixed binomials (x + main)^(j1) (y + upper)^(j2)
        j1 = rng.randrange(0, 7)
        j2 = rng.randrange(0, 7)
        s = sample_main()
        u = sample_upper()
        in_main = Fraction(j1) > r * j2 + 1
        in_upper = Fraction(j1) >= r * (j2 - 1)
        for alpha in range(j1 + 1):
            beta = j1 - alpha
            for gamma in range(j2 + 1):
                delta = j2 - gamma
                i = alpha + beta * s[0] + delta * u[0]
                j = gamma + beta * s[1] + delta * u[1]
                if in_main:
                    if not Fraction(i) > r * j + 1:
                        raise PropertyViolationError(
                            "mixed binomial left the main region",
                            witness=(j1, j2, s, u, (i, j)))
                    checked["mixed_main"] += 1
                if in_upper:
                    if not Fraction(i) >= r * (j - 1):
                        raise PropertyViolationError(
                            "mixed binomial left the upper region",
                            witness=(j1, j2, s, u, (i, j)))
                    checked["mixed_upper"] += 1
    return checked


# ---------------------------------------------------------------------------
# return maps of the automorphism
# ---------------------------------------------------------------------------

def _assert_small_const(f, floor, what):
    c = f[(0, 0)]
    if abs(c) >= floor:
        raise ConsistencyError("%s picked up a constant term %s"
                               % (what, mp.nstr(abs(c), 6)))
    out = f.copy()
    out.coeffs.pop((0, 0), None)
    return out


def corner_return_map(params, trunc, start=0, strict_linear=True):
    """The n-step return map at the corner of the level-1/level-2 fibers.

    Composes the n level-2 chart maps as truncated series in the corner
    coordinates (xi, x). Returns (H, report): H is the series pair with
    linear part diag(lambda^2, 1/lambda); the report carries the linear-part
    residual, the largest resonant-line coefficient of the first coordinate
    (vanishing exactly when c is a legitimate family parameter), and the
    class inventory of the remainder, which must lie in
    (main + resonant-line) x upper for the (1, 2) resonance.

    strict_linear=False skips the consistency error against the ideal
    multipliers and reports the computed diagonal instead; the
    mismatched-c sharpness probe needs this, since off the parameter locus
    the orbit product identity (hence the second multiplier) moves.
    """
    if trunc < 4:
        raise ValidationError("need truncation degree >= 4")
    n = params.n
    with workprec(params.precision_bits):
        d, c, lam = params.delta, params.c, params.lam
        floor = tolerance_for(params.precision_bits)
        xi = BivariateSeries.variable(trunc, 0)
        x = BivariateSeries.variable(trunc, 1)
        cur = (xi, x)
        for step in range(start, start + n):
            s = step % n
            a, b = cur
            if s == 0:
                den = a + BivariateSeries.constant(trunc, -d)
                inv = inverse_unit(den)
                cur = (a * inv, b * den)
            elif s <= n - 2:
                w = params.orbit[s - 1]
                bsq_a = b * b * a
                den = bsq_a * d + a * w + BivariateSeries.constant(trunc, w * d)
                den2 = (bsq_a + BivariateSeries.constant(trunc, w)) * w
                cur = (a * inverse_unit(den) * w,
                       b * den * inverse_unit(den2))
            else:
                den = a + (b * b * a) * c + BivariateSeries.constant(trunc, -d)
                cur = (a * inverse_unit(den), b)
            cur = (_assert_small_const(cur[0], floor, "corner chart step"),
                   _assert_small_const(cur[1], floor, "corner chart step"))

        h1, h2 = cur
        ideal = (lam * lam, 1 / lam)
        check_tol = tolerance_for(params.precision_bits // 2)
        off_res = max(abs(h1[(0, 1)]), abs(h2[(1, 0)]))
        lin_res = max(abs(h1[(1, 0)] - ideal[0]), abs(h2[(0, 1)] - ideal[1]),
                      off_res)
        if off_res > check_tol or (strict_linear and lin_res > check_tol):
            raise ConsistencyError(
                "corner linear part differs from diag(lambda^2, 1/lambda) "
                "by %s" % mp.nstr(lin_res, 6))
        eta1 = h1[(1, 0)] if not strict_linear else ideal[0]
        eta2 = h2[(0, 1)] if not strict_linear else ideal[1]

        rc = ResonanceClass(1, 2).validate(ideal[0], ideal[1], check_tol)
        resonant_max = mpf(0)
        assert_floor = check_tol
        for (i, j), v in h1.items_sorted():
            if (i, j) in ((1, 0), (0, 1)):
                continue
            cls = classify_monomial(i, j, rc, 1)
            if cls == MONOMIAL_RESONANT:
                resonant_max = max(resonant_max, abs(v))
            elif cls != MONOMIAL_MAIN and abs(v) > assert_floor:
                raise StructureViolationError(
                    "first coordinate monomial %r of size %s outside "
                    "main+resonant" % ((i, j), mp.nstr(abs(v), 6)))
        for (i, j), v in h2.items_sorted():
            if (i, j) in ((1, 0), (0, 1)):
                continue
            if classify_monomial(i, j, rc, 1) not in (MONOMIAL_MAIN,
                                                      MONOMIAL_UPPER,
                                                      MONOMIAL_RESONANT) \
                    and abs(v) > assert_floor:
                raise StructureViolationError(
                    "second coordinate monomial %r of size %s outside the "
                    "upper region" % ((i, j), mp.nstr(abs(v), 6)))

        report = {
            "linear_residual": lin_res,
            "eta": (eta1, eta2),
            "max_resonant_coefficient": resonant_max,
            "resonance": rc,
        }
        return (h1, h2), report


def infinity_return_map(params, w, trunc):
    """The n-step return map at a point [0 : 1 : w] of the invariant line.

    Coordinates (t, xi) with the point at the origin; the line is {t = 0}
    and is fixed pointwise, so H(t, xi) = (lambda t + O(t^2), xi + O(t^2)).
    The report records the residuals of that structure.
    """
    if trunc < 2:
        raise ValidationError("need truncation degree >= 2")
    n = params.n
    with workprec(params.precision_bits):
        d, c, lam = params.delta, params.c, params.lam
        tol = params.tolerance
        margin = mpf(2) ** (-(params.precision_bits // 4))
        w = mpc(w)

        # the forward line orbit of w must stay away from the blown-up points
        # (w-coordinates {0, orbit values, infinity})
        worbit = [w]
        for _ in range(n - 1):
            cur = worbit[-1]
            if abs(cur) < margin or abs(cur) > 1 / margin:
                raise ValidationError("base point orbit passes too close to a "
                                      "blown-up point")
            for ws in params.orbit:
                if abs(cur - ws) < margin:
                    raise ValidationError("base point orbit hits a blown-up "
                                          "point")
            worbit.append(c - d / cur)
        if abs(worbit[0] - (c - d / worbit[-1])) > 1000 * tol:
            raise ConsistencyError("line orbit failed to close after n steps")

        floor = tolerance_for(params.precision_bits)
        t = BivariateSeries.variable(trunc, 0)
        xi = BivariateSeries.variable(trunc, 1)
        cur = (t, xi)
        for s in range(n):
            wk = worbit[s]
            wnext = worbit[(s + 1) % n]
            a, b = cur
            y = b + BivariateSeries.constant(trunc, wk)
            iy = inverse_unit(y)
            new_t = a * iy
            new_xi = (iy * (-d) + (a * a) * (iy * iy)
                      + BivariateSeries.constant(trunc, c - wnext))
            cur = (_assert_small_const(new_t, floor, "line chart step"),
                   _assert_small_const(new_xi, floor, "line chart step"))

        h1, h2 = cur
        check_tol = tolerance_for(params.precision_bits // 2)
        mult_res = abs(h1[(1, 0)] - lam)
        low_res = mpf(0)
        for (i, j), v in h1.items_sorted():
            if i <= 1 and (i, j) != (1, 0):
                low_res = max(low_res, abs(v))
        for (i, j), v in h2.items_sorted():
            if i <= 1 and (i, j) != (0, 1):
                low_res = max(low_res, abs(v))
        id_res = abs(h2[(0, 1)] - 1)
        if mult_res > check_tol or low_res > check_tol or id_res > check_tol:
            raise ConsistencyError(
                "line return map lacks the (lambda t + O(t^2), xi + O(t^2)) "
                "structure: multiplier %s, low-order %s"
                % (mp.nstr(mult_res, 6), mp.nstr(low_res, 6)))
        report = {
            "multiplier_residual": mult_res,
            "low_order_residual": low_res,
            "line_identity_residual": id_res,
            "eta": (lam, mpc(1)),
        }
        return (h1, h2), report


# ---------------------------------------------------------------------------
# the order-by-order linearization solver
# ---------------------------------------------------------------------------

@dataclass
class LinearizationResult:
    """Outcome of the diagonal linearization solve.

    phi is the conjugacy pair, tangent to the identity. When obstruction is
    None, Phi o H - L o Phi has all coefficients below tolerance through the
    truncation degree. min_divisor is the smallest |eta^(i,j) - eta_k| over
    solved coefficients; divisor_exponent is the fitted mu in
    |divisor| ~ (i+j)^(-mu) (small-divisor monitoring); warnings list
    near-zero divisors that were not exact resonances.
    """

    phi: tuple
    min_divisor: object
    obstruction: object = None
    warnings: list = field(default_factory=list)
    divisor_exponent: object = None

    def to_json(self, bits):
        return {
            "phi": [p.to_json(bits) for p in self.phi],
            "min_divisor": mp.nstr(self.min_divisor, 17)
                           if self.min_divisor is not None else None,
            "obstruction": {
                "coordinate": self.obstruction[0],
                "monomial": list(self.obstruction[1]),
                "coefficient": mpc_to_json(self.obstruction[2], bits),
            } if self.obstruction else None,
            "warnings": [{"coordinate": k, "monomial": list(mono),
                          "divisor": mp.nstr(dv, 8)}
                         for (k, mono, dv) in self.warnings],
            "divisor_exponent": self.divisor_exponent,
        }


def linearize_diagonal(h_pair, eta1, eta2, trunc, rc=None,
                       vanish_floor=None, divisor_floor=None,
                       precision_bits=256):
    """Solve Phi o H = L o Phi order by order for diagonal L.

    H must fix the origin with linear part diag(eta1, eta2). Where the
    divisor eta1^i eta2^j - eta_k vanishes (exact resonance per rc, or
    numerically when rc is None): a forcing term below vanish_floor sets the
    coefficient to zero (normal-form freedom); a larger forcing term is
    returned in-band as the obstruction. Non-resonant divisors below
    divisor_floor are attached as small-divisor warnings.
    """
    with workprec(precision_bits):
        if vanish_floor is None:
            vanish_floor = mpf(2) ** (-(precision_bits // 4))
        if divisor_floor is None:
            divisor_floor = mpf(10) ** -40
        eta1, eta2 = mpc(eta1), mpc(eta2)
        h1, h2 = h_pair
        trunc = min(trunc, h1.trunc, h2.trunc)
        for h in (h1, h2):
            if h[(0, 0)] != 0:
                raise ValidationError("return map must fix the origin")
        lin_gap = max(abs(h1[(1, 0)] - eta1), abs(h2[(0, 1)] - eta2))
        if lin_gap > vanish_floor:
            raise ValidationError("linear part of H is not diag(eta1, eta2)")

        # power table of H for reading off coefficients of phi o H
        pow1 = [BivariateSeries.constant(trunc, 1)]
        pow2 = [BivariateSeries.constant(trunc, 1)]
        for _ in range(trunc):
            pow1.append(pow1[-1] * h1)
            pow2.append(pow2[-1] * h2)
        table = {}
        for i in range(trunc + 1):
            for j in range(trunc + 1 - i):
                table[(i, j)] = pow1[i] * pow2[j]

        etapow = {}
        for i in range(trunc + 1):
            for j in range(trunc + 1 - i):
                etapow[(i, j)] = eta1 ** i * eta2 ** j

        phi = ({}, {})   # higher-order coefficients per coordinate
        min_divisor = None
        warnings = []
        obstruction = None
        fit_points = []

        def forcing(k, key):
            h = h1 if k == 1 else h2
            total = h[key]
            store = phi[k - 1]
            for (ii, jj), coeff in store.items():
                total += coeff * table[(ii, jj)][key]
            return total

        for deg in range(2, trunc + 1):
            for i in range(deg, -1, -1):
                j = deg - i
                key = (i, j)
                for k in (1, 2):
                    etak = eta1 if k == 1 else eta2
                    divisor = etapow[key] - etak
                    resonant = (rc.resonant_for(i, j, k) if rc is not None
                                else abs(divisor) < divisor_floor)
                    rhs = forcing(k, key)
                    if resonant:
                        if abs(rhs) >= vanish_floor:
                            if obstruction is None:
                                obstruction = (k, key, rhs)
                        continue
                    if abs(divisor) < divisor_floor:
                        warnings.append((k, key, abs(divisor)))
                    coeff = -rhs / divisor
                    if coeff != 0:
                        phi[k - 1][key] = coeff
                    admag = abs(divisor)
                    if min_divisor is None or admag < min_divisor:
                        min_divisor = admag
                    fit_points.append((math.log(i + j),
                                       -float(mp.log(admag))
                                       if admag > 0 else 0.0))
            if obstruction is not None:
                break

        mu = None
        if len(fit_points) >= 4 and obstruction is None:
            xs = [p[0] for p in fit_points]
            ys = [p[1] for p in fit_points]
            nn = len(xs)
            sx, sy = sum(xs), sum(ys)
            sxx = sum(x * x for x in xs)
            sxy = sum(x * y for x, y in zip(xs, ys))
            denom = nn * sxx - sx * sx
            if denom != 0:
                mu = (nn * sxy - sx * sy) / denom

        phi1 = BivariateSeries(trunc, {(1, 0): mpc(1), **phi[0]})
        phi2 = BivariateSeries(trunc, {(0, 1): mpc(1), **phi[1]})
        return LinearizationResult(
            phi=(phi1, phi2),
            min_divisor=min_divisor,
            obstruction=obstruction,
            warnings=warnings,
            divisor_exponent=mu,
        )


def verify_conjugacy(h_pair, phi_pair, eta1, eta2, trunc, precision_bits=256):
    """Max coefficient modulus of Phi o H - L o Phi through the truncation."""
    with workprec(precision_bits):
        eta1, eta2 = mpc(eta1), mpc(eta2)
        left = compose_pair(phi_pair, h_pair)
        right = (phi_pair[0] * eta1, phi_pair[1] * eta2)
        diff1 = left[0] - right[0]
        diff2 = left[1] - right[1]
        worst = mpf(0)
        for f in (diff1, diff2):
            for (i, j), v in f.coeffs.items():
                if i + j <= trunc:
                    worst = max(worst, abs(v))
        return worst
