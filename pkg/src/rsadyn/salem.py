"""Salem polynomial construction, root isolation and certification.

The family polynomial of the automorphism family with cycle length ``n`` and
landing depth ``m`` is

    t (t^{nm} - 1) (t^n - 2 t^{n-1} + 1) / ((t^n - 1)(t - 1)) + 1,

an exact integer polynomial of degree nm. For n >= 4 (or n = 3, m >= 2) it is
a Salem polynomial: one real root lambda > 1, its reciprocal, and all other
roots on the unit circle. Root isolation is done by Aberth simultaneous
iteration at arbitrary precision with verified residuals; root-of-unity
status is certified by exact cyclotomic divisibility sweeps, never by
numerical argument tests.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import arg, mpc, mpf, nstr, workprec

from .errors import (InternalConsistencyError, NotSalemError,
                     NumericFailureError, ValidationError)
from .numeric import (check_precision, tolerance_for,
                      unconditional_cyclotomic_bound)


class IntPolynomial:
    """Exact integer-coefficient univariate polynomial.

    Coefficients are stored ascending by degree with no trailing zeros; the
    zero polynomial has an empty coefficient tuple. Instances are immutable
    and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("IntPolynomial is immutable")

    # -- basic structure ---------------------------------------------------

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "IntPolynomial(%r)" % (list(self.coeffs),)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append("%st" % ("" if c == 1 else "-" if c == -1 else c))
            else:
                parts.append("%st^%d" % ("" if c == 1 else "-" if c == -1 else c, k))
        return " + ".join(parts).replace("+ -", "- ")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                              for i in range(n)])

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def divmod_exact(self, divisor):
        """Quotient and remainder over Q, demanding integer results.

        Raises InternalConsistencyError when the division is not exact over
        the integers (nonzero remainder or fractional quotient).
        """
        q, r = _frac_divmod([Fraction(c) for c in self.coeffs],
                            [Fraction(c) for c in divisor.coeffs])
        if any(c != 0 for c in r):
            raise InternalConsistencyError(
                "polynomial division left a nonzero remainder")
        if any(c.denominator != 1 for c in q):
            raise InternalConsistencyError(
                "polynomial division produced non-integer coefficients")
        return IntPolynomial([int(c) for c in q])

    def divides(self, other):
        """True when self divides other exactly over Z."""
        if self.is_zero():
            return other.is_zero()
        q, r = _frac_divmod([Fraction(c) for c in other.coeffs],
                            [Fraction(c) for c in self.coeffs])
        return all(c == 0 for c in r) and all(c.denominator == 1 for c in q)

    def derivative(self):
        return IntPolynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    # -- evaluation ----------------------------------------------------------

    def eval_fraction(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mpc(self, z):
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def is_palindromic(self):
        return self.coeffs == tuple(reversed(self.coeffs))

    # -- serialization -------------------------------------------------------

    def to_json(self):
        """JSON form: array of decimal integer strings, ascending degree."""
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([int(s) for s in data])


def _frac_divmod(num, den):
    """Long division of coefficient lists (ascending) over Fraction."""
    if not den or all(c == 0 for c in den):
        raise ZeroDivisionError("polynomial division by zero")
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    q = [Fraction(0)] * max(0, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        factor = num[k] / lead
        q[k - dd] = factor
        if factor:
            for i in range(dd + 1):
                num[k - dd + i] -= factor * den[i]
    return q, num[:dd] if dd else []


def poly_gcd(a, b):
    """Primitive gcd over Z via the Euclidean algorithm over Q."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]
    while fb and any(c != 0 for c in fb):
        _, r = _frac_divmod(fa, fb)
        while r and r[-1] == 0:
            r.pop()
        fa, fb = fb, r
    if not fa:
        return IntPolynomial([])
    denom = 1
    for c in fa:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in fa]
    g = 0
    for c in ints:
        g = _int_gcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(ints)


def _int_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def cyclotomic(d):
    """The d-th cyclotomic polynomial, by recursive exact division."""
    num = IntPolynomial([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            num = num.divmod_exact(cyclotomic(e))
    return num


def salem_polynomial(n, m):
    """Exact expansion of t(t^{nm}-1)(t^n-2t^{n-1}+1)/((t^n-1)(t-1)) + 1.

    Valid for n >= 3, m >= 1; the two divisions are exact. Degree nm,
    constant term 1, palindromic coefficients.
    """
    if n < 3 or m < 1:
        raise ValidationError("require n >= 3 and m >= 1, got n=%r m=%r" % (n, m))
    tnm = IntPolynomial([-1] + [0] * (n * m - 1) + [1])
    head = IntPolynomial([1] + [0] * (n - 2) + [-2, 1])     # t^n - 2 t^{n-1} + 1
    t = IntPolynomial([0, 1])
    numerator = t * tnm * head
    tn = IntPolynomial([-1] + [0] * (n - 1) + [1])
    quotient = numerator.divmod_exact(tn).divmod_exact(IntPolynomial([-1, 1]))
    return quotient + 1


def find_roots(poly, precision_bits, maxsteps=None):
    """All roots (with multiplicity) by Aberth simultaneous iteration.

    Returns deg(poly) mpc values sorted by (argument, modulus) so that a
    root index is reproducible across runs and precisions. Residuals
    |p(root)| are verified to be below 2**(-precision_bits/2); failure to
    converge within the step budget raises NumericFailureError carrying the
    best residual reached.
    """
    precision_bits = check_precision(precision_bits)
    deg = poly.degree()
    if deg < 1:
        raise ValidationError("find_roots requires a nonconstant polynomial")
    if maxsteps is None:
        maxsteps = 128 + precision_bits

    # Zero roots split off exactly so Aberth never sees them.
    nzero = 0
    coeffs = list(poly.coeffs)
    while coeffs[0] == 0:
        coeffs.pop(0)
        nzero += 1
    reduced = IntPolynomial(coeffs)

    # Residual target far below the certificate tolerance 2^(-bits/2):
    # a double root with residual 2^(-bits-32) is located to ~2^(-bits/2-16),
    # so modulus classification keeps headroom even for clustered roots.
    work = precision_bits + max(96, precision_bits // 2)
    with workprec(work):
        target = mpf(2) ** (-(precision_bits + 32))
        if reduced.degree() == 0:
            # pure power t^k: nothing left for the iteration
            with workprec(precision_bits):
                return [mpc(0)] * nzero
        roots = [mpc(z) for z in _initial_guesses(reduced)]
        dpoly = reduced.derivative()
        best = mpf("inf")
        for _ in range(maxsteps):
            residuals = [abs(reduced.eval_mpc(z)) for z in roots]
            worst = max(residuals)
            best = min(best, worst)
            if worst < target:
                break
            new_roots = []
            for i, z in enumerate(roots):
                pz = reduced.eval_mpc(z)
                if abs(pz) < target:
                    new_roots.append(z)
                    continue
                dz = dpoly.eval_mpc(z)
                if dz == 0:
                    # nudge off a critical point, deterministically
                    z = z + mpf(2) ** (-precision_bits // 3) * (1 + 1j)
                    dz = dpoly.eval_mpc(z)
                    pz = reduced.eval_mpc(z)
                w = pz / dz
                s = mpc(0)
                for jj, zj in enumerate(roots):
                    if jj != i:
                        dzz = z - zj
                        if dzz == 0:
                            dzz = mpf(2) ** (-work + 8)
                        s += 1 / dzz
                denom = 1 - w * s
                if denom == 0:
                    step = w
                else:
                    step = w / denom
                new_roots.append(z - step)
            roots = new_roots
        else:
            raise NumericFailureError(
                "Aberth iteration missed residual target 2^%d"
                % (-(precision_bits // 2)), best_residual=best)

    with workprec(precision_bits):
        out = [mpc(0)] * nzero + [mpc(z) for z in roots]
        bad = max(abs(poly.eval_mpc(z)) for z in out)
        if bad >= tolerance_for(precision_bits):
            raise NumericFailureError(
                "root residual %s above tolerance" % mp_str(bad),
                best_residual=bad)
        out.sort(key=lambda z: (arg(z), abs(z)))
    return out


def mp_str(x):
    return nstr(x, 8)


def _initial_guesses(poly):
    """Double-precision starting points for Aberth.

    numpy's companion-matrix roots give excellent starts for moderate
    degrees; overflow or failure falls back to a perturbed circle.
    """
    deg = poly.degree()
    try:
        arr = np.array([float(c) for c in reversed(poly.coeffs)], dtype=float)
        if np.all(np.isfinite(arr)):
            guesses = np.roots(arr)
            if len(guesses) == deg and np.all(np.isfinite(guesses)):
                # deterministic tiny spread so clustered starts never coincide
                return [complex(g) + 1e-12 * (k + 1) * (0.7 + 0.3j)
                        for k, g in enumerate(sorted(guesses, key=lambda z: (z.real, z.imag)))]
    except (OverflowError, np.linalg.LinAlgError, ValueError):
        pass
    import cmath
    radius = 1.0 + 1.0 / deg
    return [radius * cmath.exp(2j * cmath.pi * (k + 0.25) / deg) for k in range(deg)]


def cyclotomic_part(poly, k_max=None):
    """Factor out every cyclotomic divisor of order <= k_max.

    Returns (core, factors) where factors is a list of (order, multiplicity)
    and core is poly divided by the product of those cyclotomic powers.
    """
    if k_max is None:
        k_max = unconditional_cyclotomic_bound(poly.degree())
    core = poly
    factors = []
    for d in range(1, k_max + 1):
        phi = cyclotomic(d)
        if phi.degree() > core.degree():
            continue
        mult = 0
        while phi.divides(core):
            core = core.divmod_exact(phi)
            mult += 1
        if mult:
            factors.append((d, mult))
    return core, factors


def certify_not_root_of_unity(poly, k_max):
    """Exact certificate that no root of poly is a root of unity of order <= k_max.

    Equivalent to gcd(poly, t^k - 1) = 1 for all k <= k_max: a shared root
    with t^k - 1 is a primitive d-th root of unity for some d | k, and since
    the cyclotomic polynomials are irreducible over Q that happens exactly
    when some cyclotomic of order d <= k_max divides poly. The report notes
    whether k_max reaches the unconditional bound (largest k with
    phi(k) <= deg poly).
    """
    if poly.is_zero():
        raise ValidationError("zero polynomial has every root")
    if k_max < poly.degree():
        raise ValidationError("k_max must be at least deg(poly)")
    _, factors = cyclotomic_part(poly, k_max)
    bound = unconditional_cyclotomic_bound(poly.degree())
    report = {
        "clean": not factors,
        "clearance": k_max,
        "unconditional": k_max >= bound,
        "unconditional_bound": bound,
        "cyclotomic_factors": factors,
    }
    return not factors, report


@dataclass(frozen=True)
class SalemCertificate:
    """Verified root-distribution data for a Salem polynomial.

    lambda_root is the unique real root > 1; unit_roots hold every root with
    modulus within `tolerance` of 1 (sorted by (argument, modulus));
    nonunity_unit_roots are the unit roots additionally certified not to be
    roots of unity (exact cyclotomic sweep up to cyclotomic_clearance).
    """

    poly: IntPolynomial
    lambda_root: object
    unit_roots: tuple
    nonunity_unit_roots: tuple
    tolerance: object
    cyclotomic_clearance: int
    precision_bits: int

    def to_json(self):
        from .numeric import mpc_to_json
        bits = self.precision_bits
        return {
            "poly": self.poly.to_json(),
            "lambda": mpc_to_json(mpc(self.lambda_root), bits),
            "unit_roots": [mpc_to_json(z, bits) for z in self.unit_roots],
            "nonunity_unit_root_count": len(self.nonunity_unit_roots),
            "tolerance": mp_str(self.tolerance),
            "cyclotomic_clearance": self.cyclotomic_clearance,
            "precision_bits": bits,
        }


def salem_certificate(poly, precision_bits, tolerance=None):
    """Certify the Salem root distribution of an integer polynomial.

    Requirements checked, in order: palindromic coefficients; exactly one
    root with modulus > 1 + tol, real, with its reciprocal also a root; all
    remaining roots within tol of the unit circle; not every root a root of
    unity (exact cyclotomic sweep). Raises NotSalemError naming the failure.
    """
    precision_bits = check_precision(precision_bits)
    if poly.degree() < 2:
        raise NotSalemError("degree < 2 cannot carry a Salem distribution")
    with workprec(precision_bits):
        tol = tolerance if tolerance is not None else tolerance_for(precision_bits)

        core, cyc_factors = cyclotomic_part(poly)
        clearance = unconditional_cyclotomic_bound(poly.degree())
        if core.degree() == 0:
            raise NotSalemError(
                "no root of modulus > 1; all roots are roots of unity")

        roots = find_roots(poly, precision_bits)
        large = [z for z in roots if abs(z) > 1 + tol]
        unit = [z for z in roots if abs(abs(z) - 1) < tol]
        small = [z for z in roots if abs(z) < 1 - tol]

        if not large:
            raise NotSalemError("no root of modulus > 1")
        if len(large) > 1:
            raise NotSalemError("more than one root of modulus > 1",
                                offending_root=large[1])
        lam = large[0]
        if abs(lam.imag) > tol:
            raise NotSalemError("the root of modulus > 1 is not real",
                                offending_root=lam)
        lam = mpf(lam.real)
        if len(small) != 1:
            raise NotSalemError("expected exactly one root inside the unit circle")
        if abs(small[0] - 1 / lam) > tol:
            raise NotSalemError("1/lambda is not a root",
                                offending_root=small[0])
        if len(unit) != poly.degree() - 2:
            stray = [z for z in roots
                     if z not in large and z not in small and z not in unit]
            raise NotSalemError("a root is neither lambda, 1/lambda nor on the "
                                "unit circle",
                                offending_root=stray[0] if stray else None)
        if not poly.is_palindromic():
            raise NotSalemError("coefficients are not palindromic")

        # unit roots certified off the roots of unity: roots of the
        # cyclotomic-free core
        core_tol = tolerance_for(precision_bits // 2)
        nonunity = tuple(z for z in unit if abs(core.eval_mpc(z)) < core_tol) \
            if core.degree() > 0 else ()

        return SalemCertificate(
            poly=poly,
            lambda_root=lam,
            unit_roots=tuple(unit),
            nonunity_unit_roots=nonunity,
            tolerance=tol,
            cyclotomic_clearance=clearance,
            precision_bits=precision_bits,
        )
