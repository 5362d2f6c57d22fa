"""Polynomial construction, root isolation, certification.

Oracles used here and nowhere else: sympy exact expansion/factorization for
the polynomial identities, Fraction-evaluated sign changes for root
brackets, and a from-scratch Euclidean gcd over Q for the root-of-unity
certificate.
"""

from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf, workprec

from rsadyn import (IntPolynomial, NotSalemError, certify_not_root_of_unity,
                    find_roots, salem_certificate, salem_polynomial)
from rsadyn.errors import InternalConsistencyError, ValidationError
from rsadyn.numeric import unconditional_cyclotomic_bound
from rsadyn.salem import cyclotomic, cyclotomic_part, poly_gcd


# -- construction ------------------------------------------------------------

def sympy_family_polynomial(n, m):
    """Independent symbolic oracle: expand and divide with sympy."""
    import sympy
    t = sympy.Symbol("t")
    num = t * (t ** (n * m) - 1) * (t ** n - 2 * t ** (n - 1) + 1)
    den = (t ** n - 1) * (t - 1)
    quo, rem = sympy.div(num, den, t)
    assert rem == 0
    poly = sympy.Poly(quo + 1, t)
    return [int(c) for c in reversed(poly.all_coeffs())]


def test_family_polynomial_41_matches_symbolic_oracle():
    assert list(salem_polynomial(4, 1).coeffs) == sympy_family_polynomial(4, 1)
    assert list(salem_polynomial(4, 1).coeffs) == [1, -1, -1, -1, 1]


@pytest.mark.parametrize("n,m", [(4, 1), (5, 1), (5, 2), (7, 2), (8, 5)])
def test_family_polynomial_matches_symbolic_oracle(n, m):
    assert list(salem_polynomial(n, m).coeffs) == sympy_family_polynomial(n, m)


@pytest.mark.parametrize("n,m", [(3, 1), (4, 1), (4, 3), (5, 2), (6, 4),
                                 (7, 1), (8, 2)])
def test_constant_term_and_degree(n, m):
    p = salem_polynomial(n, m)
    assert p.coeffs[0] == 1
    assert p.degree() == n * m


def test_family_polynomial_31_factors_into_cyclotomics():
    import sympy
    t = sympy.Symbol("t")
    p = salem_polynomial(3, 1)
    factored = sympy.factor(sum(c * t ** k for k, c in enumerate(p.coeffs)))
    assert factored == (t - 1) ** 2 * (t + 1)
    assert list(p.coeffs) == [1, -1, -1, 1]


@pytest.mark.parametrize("n,m", [(4, 1), (5, 3), (6, 2), (8, 4)])
def test_palindromic_coefficients(n, m):
    assert salem_polynomial(n, m).is_palindromic()


def test_invalid_range_rejected():
    with pytest.raises(ValidationError):
        salem_polynomial(2, 1)
    with pytest.raises(ValidationError):
        salem_polynomial(4, 0)


def test_inexact_division_raises():
    with pytest.raises(InternalConsistencyError):
        IntPolynomial([1, 0, 1]).divmod_exact(IntPolynomial([1, 1]))


def test_polynomial_json_roundtrip():
    p = salem_polynomial(5, 2)
    assert IntPolynomial.from_json(p.to_json()) == p
    assert p.to_json()[0] == "1"


# -- root finding ------------------------------------------------------------

def test_roots_of_t2_plus_1():
    roots = find_roots(IntPolynomial([1, 0, 1]), 256)
    with workprec(256):
        target = mpf(2) ** -128
        assert min(abs(r - mpc(0, 1)) for r in roots) < target
        assert min(abs(r + mpc(0, 1)) for r in roots) < target


def test_real_root_bracket_41():
    # independent bracket oracle: exact sign change over Fraction
    p = salem_polynomial(4, 1)
    lo, hi = Fraction(172, 100), Fraction(173, 100)
    assert p.eval_fraction(lo) < 0 < p.eval_fraction(hi)
    roots = find_roots(p, 256)
    with workprec(256):
        real = [r for r in roots if abs(r.imag) < mpf(10) ** -50
                and mpf("1.72") < r.real < mpf("1.73")]
        assert len(real) == 1


def test_unit_circle_root_count_41():
    # degree 4 minus the Salem pair leaves exactly 2 unit-circle roots
    roots = find_roots(salem_polynomial(4, 1), 256)
    with workprec(256):
        unit = [r for r in roots if abs(abs(r) - 1) < mpf(10) ** -30]
        assert len(unit) == 2


def test_root_residuals_below_target():
    p = salem_polynomial(5, 2)
    for bits in (128, 256):
        roots = find_roots(p, bits)
        with workprec(bits + 64):
            target = mpf(2) ** -(bits // 2)
            assert max(abs(p.eval_mpc(r)) for r in roots) < target


def test_unit_root_count_stable_under_precision_doubling():
    p = salem_polynomial(6, 3)
    counts = []
    for bits in (128, 256):
        roots = find_roots(p, bits)
        with workprec(bits):
            counts.append(sum(1 for r in roots
                              if abs(abs(r) - 1) < mpf(10) ** -20))
    assert counts[0] == counts[1]


def test_roots_with_multiplicity():
    # (t-1)^2 (t+1): the double root must still meet the residual target
    p = IntPolynomial([1, -1, -1, 1])
    roots = find_roots(p, 192)
    assert len(roots) == 3
    with workprec(256):
        assert max(abs(p.eval_mpc(r)) for r in roots) < mpf(2) ** -96
        assert sum(1 for r in roots if abs(r - 1) < mpf(10) ** -20) == 2


def test_root_order_deterministic():
    p = salem_polynomial(5, 1)
    a = find_roots(p, 192)
    b = find_roots(p, 192)
    assert all(x == y for x, y in zip(a, b))


# -- root-of-unity certification ----------------------------------------------

def naive_gcd_with_unity(p, k):
    """Oracle: primitive gcd over Z with t^k - 1 by Euclid over Q."""
    return poly_gcd(p, IntPolynomial([-1] + [0] * (k - 1) + [1]))


def test_certify_41_unconditional():
    p = salem_polynomial(4, 1)
    ok, report = certify_not_root_of_unity(p, 30)
    assert ok and report["unconditional"]
    # phi(k) <= 4 forces k <= 12
    assert unconditional_cyclotomic_bound(4) == 12
    # oracle cross-check
    for k in range(1, 31):
        assert naive_gcd_with_unity(p, k).degree() == 0


def test_certify_t4_minus_1_false():
    p = IntPolynomial([-1, 0, 0, 0, 1])
    ok, report = certify_not_root_of_unity(p, 8)
    assert not ok
    assert naive_gcd_with_unity(p, 4).degree() > 0


def test_certify_with_root_one_false():
    p = IntPolynomial([-1, 1]) * salem_polynomial(4, 1)
    ok, _ = certify_not_root_of_unity(p, 10)
    assert not ok


def test_cyclotomic_polynomials():
    assert cyclotomic(1) == IntPolynomial([-1, 1])
    assert cyclotomic(4) == IntPolynomial([1, 0, 1])
    assert cyclotomic(12) == IntPolynomial([1, 0, -1, 0, 1])


def test_cyclotomic_part_splits_31():
    core, factors = cyclotomic_part(salem_polynomial(3, 1))
    assert core.degree() == 0
    assert sorted(factors) == [(1, 2), (2, 1)]


# -- the certificate -----------------------------------------------------------

def test_certificate_51():
    cert = salem_certificate(salem_polynomial(5, 1), 256)
    with workprec(256):
        assert 1 < cert.lambda_root < 2
        assert abs(mpc(cert.lambda_root).imag) == 0
        assert len(cert.unit_roots) == 5 - 2


def test_certificate_rejects_t2_plus_1():
    with pytest.raises(NotSalemError) as err:
        salem_certificate(IntPolynomial([1, 0, 1]), 256)
    assert "no root of modulus > 1" in str(err.value)


def test_certificate_rejects_31_naming_roots_of_unity():
    with pytest.raises(NotSalemError) as err:
        salem_certificate(salem_polynomial(3, 1), 256)
    assert "roots of unity" in str(err.value)


def test_certificate_reciprocal_root_present():
    cert = salem_certificate(salem_polynomial(6, 1), 256)
    p = cert.poly
    with workprec(256):
        recip = 1 / cert.lambda_root
        assert abs(p.eval_mpc(mpc(recip))) < mpf(10) ** -70
