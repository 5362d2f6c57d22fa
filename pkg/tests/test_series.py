"""Series ring operations, resonance classes, return maps, linearization."""

import random

import pytest
from mpmath import exp, mp, mpc, mpf, pi, sqrt, workprec

from rsadyn import build_params, with_mismatched_c
from rsadyn.errors import CompositionDomainError, ValidationError
from rsadyn.series import (MONOMIAL_MAIN, MONOMIAL_OUTSIDE, MONOMIAL_RESONANT,
                           MONOMIAL_UPPER, BivariateSeries, ResonanceClass,
                           classify_monomial, closure_property_check,
                           compose_pair, corner_return_map,
                           infinity_return_map, inverse_unit,
                           linearize_diagonal, series_compose, series_mul,
                           verify_conjugacy)

TOL = mpf(10) ** -70


def rand_series(trunc, rng, nterms=6):
    s = BivariateSeries(trunc)
    for _ in range(nterms):
        i, j = rng.randrange(0, trunc), rng.randrange(0, trunc)
        if i + j <= trunc:
            s.coeffs[(i, j)] = mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return s


# -- ring laws ---------------------------------------------------------------

def test_ring_laws_sampled():
    rng = random.Random(3)
    with workprec(128):
        for _ in range(20):
            a = rand_series(8, rng)
            b = rand_series(8, rng)
            c = rand_series(8, rng)
            lhs = series_mul(series_mul(a, b), c)
            rhs = series_mul(a, series_mul(b, c))
            assert (lhs - rhs).max_abs() < mpf(10) ** -30
            d1 = series_mul(a, b + c)
            d2 = series_mul(a, b) + series_mul(a, c)
            assert (d1 - d2).max_abs() < mpf(10) ** -30


def test_mul_by_zero():
    with workprec(128):
        z = BivariateSeries(6)
        a = BivariateSeries(6, {(1, 2): mpc(3)})
        assert not series_mul(a, z).coeffs


def test_compose_with_identity():
    rng = random.Random(5)
    with workprec(128):
        f = rand_series(7, rng)
        f.coeffs.pop((0, 0), None)
        ident = (BivariateSeries.variable(7, 0), BivariateSeries.variable(7, 1))
        assert (series_compose(f, ident) - f).max_abs() < mpf(10) ** -32


def test_compose_hand_example():
    # (x y) o (l x, y/l + x^2) = x y + l x^3
    with workprec(192):
        lam = exp(2j * pi * mpf(2) ** -mpf("1.5"))
        f = BivariateSeries(4, {(1, 1): 1})
        g = (BivariateSeries(4, {(1, 0): lam}),
             BivariateSeries(4, {(0, 1): 1 / lam, (2, 0): 1}))
        out = series_compose(f, g)
        assert abs(out[(1, 1)] - 1) < TOL
        assert abs(out[(3, 0)] - lam) < TOL
        assert len(out.coeffs) == 2


def test_compose_associativity():
    rng = random.Random(11)
    with workprec(128):
        f = rand_series(6, rng)
        g = (rand_series(6, rng), rand_series(6, rng))
        h = (rand_series(6, rng), rand_series(6, rng))
        for s in (*g, *h):
            s.coeffs.pop((0, 0), None)
        lhs = series_compose(series_compose(f, g), h)
        rhs = series_compose(f, compose_pair(g, h))
        assert (lhs - rhs).max_abs() < mpf(10) ** -28


def test_compose_rejects_constant_term():
    with workprec(128):
        f = BivariateSeries(4, {(1, 0): 1})
        g = (BivariateSeries(4, {(0, 0): 1}), BivariateSeries(4))
        with pytest.raises(CompositionDomainError):
            series_compose(f, g)


def test_inverse_unit():
    rng = random.Random(7)
    with workprec(128):
        f = rand_series(8, rng)
        f.coeffs[(0, 0)] = mpc(2, 1)
        inv = inverse_unit(f)
        prod = series_mul(f, inv)
        one = BivariateSeries.constant(8, 1)
        assert (prod - one).max_abs() < mpf(10) ** -30


# -- resonance classes ----------------------------------------------------------

def test_classify_11_examples():
    rc = ResonanceClass(1, 1)
    assert classify_monomial(2, 0, rc, 1) == MONOMIAL_MAIN       # x^2
    assert classify_monomial(2, 1, rc, 1) == MONOMIAL_RESONANT   # x^2 y
    assert classify_monomial(0, 2, rc, 1) == MONOMIAL_OUTSIDE


def test_classify_12_resonant_line():
    rc = ResonanceClass(1, 2)
    for m in range(1, 7):
        assert classify_monomial(m + 1, 2 * m, rc, 1) == MONOMIAL_RESONANT
    assert classify_monomial(3, 2, rc, 1) == MONOMIAL_MAIN
    assert classify_monomial(1, 3, rc, 1) == MONOMIAL_UPPER


def test_classify_coordinate_2_mirror():
    rc = ResonanceClass(1, 2)
    # coordinate-2 resonant line: j = 2 i + 1
    for i in range(1, 5):
        assert classify_monomial(i, 2 * i + 1, rc, 2) == MONOMIAL_RESONANT


def test_resonant_for_lattice_test():
    rc = ResonanceClass(1, 2)
    assert rc.resonant_for(2, 2, 1)          # (i-1, j) = (1, 2)
    assert rc.resonant_for(3, 4, 1)
    assert not rc.resonant_for(2, 1, 1)
    assert rc.resonant_for(1, 3, 2)          # (i, j-1) = (1, 2)
    assert not rc.resonant_for(1, 0, 1)      # the linear monomial itself


def test_resonance_class_validation():
    with pytest.raises(ValidationError):
        ResonanceClass(2, 4)
    with pytest.raises(ValidationError):
        ResonanceClass(0, 1)
    with workprec(128):
        lam = exp(2j * pi * sqrt(mpf(2)))
        ResonanceClass(1, 2).validate(lam ** 2, 1 / lam, mpf(10) ** -20)
        with pytest.raises(ValidationError):
            ResonanceClass(1, 1).validate(lam ** 2, 1 / lam, mpf(10) ** -20)


def test_closure_properties():
    report = closure_property_check(ResonanceClass(1, 2), samples=150, seed=1)
    assert report["main_power"] == 150
    assert report["mixed_main"] > 0 and report["mixed_upper"] > 0
    closure_property_check(ResonanceClass(1, 1), samples=80, seed=2)
    closure_property_check(ResonanceClass(2, 3), samples=80, seed=3)


# -- return maps -------------------------------------------------------------------

@pytest.fixture(scope="module")
def corner411():
    p = build_params(4, 1, 1)
    with workprec(256):
        return p, corner_return_map(p, 12)


def test_corner_linear_part(corner411):
    p, (h, rep) = corner411
    with workprec(256):
        assert rep["linear_residual"] < mpf(10) ** -25
        assert abs(h[0][(1, 0)] - p.lam ** 2) < mpf(10) ** -70
        assert abs(h[1][(0, 1)] - 1 / p.lam) < mpf(10) ** -70


def test_corner_resonant_coefficients_vanish(corner411):
    _, (h, rep) = corner411
    with workprec(256):
        assert rep["max_resonant_coefficient"] < mpf(2) ** -64


def test_corner_first_chart_step_structure(params411):
    # the first chart factor has first coordinate -xi/delta + main terms
    from rsadyn.series import BivariateSeries, inverse_unit
    p = params411
    with workprec(256):
        xi = BivariateSeries.variable(8, 0)
        x = BivariateSeries.variable(8, 1)
        den = xi + BivariateSeries.constant(8, -p.delta)
        first = xi * inverse_unit(den)
        assert abs(first[(1, 0)] + 1 / p.delta) < TOL
        rc = ResonanceClass(1, 2)
        for (i, j), v in first.items_sorted():
            if (i, j) == (1, 0) or abs(v) < mpf(10) ** -60:
                continue
            assert classify_monomial(i, j, rc, 1) == MONOMIAL_MAIN


def test_corner_composition_structure_claim(corner411):
    # remainder of the full return map lies in (main + vanished resonant) x upper
    _, (h, rep) = corner411
    rc = rep["resonance"]
    with workprec(256):
        for (i, j), v in h[0].items_sorted():
            if (i, j) in ((1, 0), (0, 1)) or abs(v) < mpf(10) ** -60:
                continue
            assert classify_monomial(i, j, rc, 1) == MONOMIAL_MAIN
        for (i, j), v in h[1].items_sorted():
            if (i, j) in ((1, 0), (0, 1)) or abs(v) < mpf(10) ** -60:
                continue
            assert classify_monomial(i, j, rc, 1) in (MONOMIAL_MAIN,
                                                      MONOMIAL_UPPER)


def test_pairwise_chart_composition_stays_in_class(params411):
    # compositionality: composing two chart steps keeps the class structure
    p = params411
    rc = ResonanceClass(1, 2)
    with workprec(256):
        xi = BivariateSeries.variable(10, 0)
        x = BivariateSeries.variable(10, 1)
        den = xi + BivariateSeries.constant(10, -p.delta)
        f1 = (xi * inverse_unit(den), x * den)
        w = p.orbit[0]
        bsq = x * x * xi
        den2 = bsq * p.delta + xi * w + BivariateSeries.constant(10, w * p.delta)
        den3 = (bsq + BivariateSeries.constant(10, w)) * w
        f2 = (xi * inverse_unit(den2) * w, x * den2 * inverse_unit(den3))
        comp = compose_pair(f2, f1)
        for (i, j), v in comp[0].items_sorted():
            if (i, j) == (1, 0) or abs(v) < mpf(10) ** -55:
                continue
            assert classify_monomial(i, j, rc, 1) in (MONOMIAL_MAIN,
                                                      MONOMIAL_RESONANT)
        for (i, j), v in comp[1].items_sorted():
            if (i, j) == (0, 1) or abs(v) < mpf(10) ** -55:
                continue
            assert classify_monomial(i, j, rc, 1) in (MONOMIAL_MAIN,
                                                      MONOMIAL_UPPER,
                                                      MONOMIAL_RESONANT)


def test_infinity_return_map_structure(params411):
    p = params411
    with workprec(256):
        w0 = mpf("0.37") + mpf("0.11") * 1j
        h, rep = infinity_return_map(p, w0, 10)
        assert rep["multiplier_residual"] < mpf(10) ** -60
        assert rep["low_order_residual"] < mpf(10) ** -60
        assert rep["line_identity_residual"] < mpf(10) ** -60
        # coefficient of t*xi in coordinate 1 vanishes
        assert abs(h[0][(1, 1)]) < mpf(10) ** -60


def test_infinity_return_map_rejects_orbit_through_blownup(params411):
    with workprec(256):
        with pytest.raises(ValidationError):
            infinity_return_map(params411, params411.orbit[0], 8)


# -- the linearization solver ---------------------------------------------------

def test_linearize_hand_example():
    with workprec(192):
        lam = exp(2j * pi / sqrt(mpf(7)))
        h = (BivariateSeries(8, {(1, 0): lam}),
             BivariateSeries(8, {(0, 1): 1 / lam, (2, 0): 1}))
        res = linearize_diagonal(h, lam, 1 / lam, 8,
                                 rc=ResonanceClass(1, 1), precision_bits=192)
        assert res.obstruction is None
        beta = res.phi[1][(2, 0)]
        assert abs(beta - 1 / (1 / lam - lam ** 2)) < mpf(10) ** -50


def test_linearize_identity_map():
    with workprec(128):
        lam = exp(2j * pi / sqrt(mpf(5)))
        h = (BivariateSeries(6, {(1, 0): lam}),
             BivariateSeries(6, {(0, 1): 1 / lam}))
        res = linearize_diagonal(h, lam, 1 / lam, 6,
                                 rc=ResonanceClass(1, 1), precision_bits=128)
        assert res.obstruction is None
        assert len(res.phi[0].coeffs) == 1 and len(res.phi[1].coeffs) == 1


def test_linearize_obstruction():
    with workprec(128):
        lam = exp(2j * pi / sqrt(mpf(3)))
        h = (BivariateSeries(6, {(1, 0): lam, (2, 1): 1}),
             BivariateSeries(6, {(0, 1): 1 / lam}))
        res = linearize_diagonal(h, lam, 1 / lam, 6,
                                 rc=ResonanceClass(1, 1), precision_bits=128)
        assert res.obstruction is not None
        k, mono, coeff = res.obstruction
        assert (k, mono) == (1, (2, 1))
        assert abs(coeff - 1) < mpf(10) ** -25


def test_linearize_corner_pipeline(corner411):
    p, (h, rep) = corner411
    with workprec(256):
        eta1, eta2 = rep["eta"]
        res = linearize_diagonal(h, eta1, eta2, 12, rc=rep["resonance"],
                                 precision_bits=256)
        assert res.obstruction is None
        assert res.min_divisor > 0
        assert not res.warnings
        conj = verify_conjugacy(h, res.phi, eta1, eta2, 12,
                                precision_bits=256)
        assert conj < mpf(10) ** -20


def test_linearize_infinity_pipeline(params411):
    # divisors are lam^i - lam (coordinate 1) and lam^i - 1 (coordinate 2),
    # i >= 2: solved conjugacy verifies and phi has t-degree >= 2 throughout
    p = params411
    with workprec(256):
        w0 = mpf("0.53") - mpf("0.21") * 1j
        h, _ = infinity_return_map(p, w0, 10)
        res = linearize_diagonal(h, p.lam, 1, 10, rc=None, precision_bits=256)
        assert res.obstruction is None
        conj = verify_conjugacy(h, res.phi, p.lam, 1, 10, precision_bits=256)
        assert conj < mpf(10) ** -20
        for pp in res.phi:
            for (i, j) in pp.coeffs:
                if (i, j) not in ((1, 0), (0, 1)):
                    assert i >= 2


def test_mismatched_c_obstruction(params411):
    with workprec(256):
        bad = with_mismatched_c(params411, 1 + mpf(10) ** -2)
        h, rep = corner_return_map(bad, 8, strict_linear=False)
        assert rep["max_resonant_coefficient"] > mpf(2) ** -64
        res = linearize_diagonal(h, rep["eta"][0], rep["eta"][1], 8,
                                 rc=rep["resonance"], precision_bits=256)
        assert res.obstruction is not None
        assert res.obstruction[0] == 1
        assert res.obstruction[1] == (2, 2)


def test_verify_conjugacy_identity_on_linear():
    with workprec(128):
        lam = exp(2j * pi / sqrt(mpf(11)))
        h = (BivariateSeries(6, {(1, 0): lam}),
             BivariateSeries(6, {(0, 1): 1 / lam}))
        phi = (BivariateSeries.variable(6, 0), BivariateSeries.variable(6, 1))
        assert verify_conjugacy(h, phi, lam, 1 / lam, 6,
                                precision_bits=128) == 0


def test_verify_conjugacy_perturbation_lower_bound(corner411):
    # perturbing one solved coefficient by eps moves the defect at that
    # monomial by exactly eps * divisor
    p, (h, rep) = corner411
    with workprec(256):
        eta1, eta2 = rep["eta"]
        res = linearize_diagonal(h, eta1, eta2, 12, rc=rep["resonance"],
                                 precision_bits=256)
        phi1 = res.phi[0].copy()
        phi2 = res.phi[1].copy()
        key = (2, 0)
        eps = mpf(10) ** -6
        phi1.coeffs[key] = phi1[key] + eps
        divisor = abs(eta1 ** 2 - eta1)
        resid = verify_conjugacy(h, (phi1, phi2), eta1, eta2, 12,
                                 precision_bits=256)
        assert resid >= eps * divisor * (1 - mpf(10) ** -6)


def test_series_json(corner411):
    _, (h, _) = corner411
    data = h[0].to_json(256)
    assert "1,0" in data
    assert set(data["1,0"].keys()) == {"re", "im"}


@pytest.mark.parametrize("n,m,j", [(5, 1, 1), (5, 1, 2), (6, 1, 1),
                                   (7, 2, 1)])
def test_corner_pipeline_other_members(n, m, j):
    # the solve is not tuned to (4,1,1): odd n, other j, deeper m all land
    # at the arithmetic floor
    p = build_params(n, m, j)
    with workprec(256):
        h, rep = corner_return_map(p, 8)
        assert rep["linear_residual"] < mpf(10) ** -60
        assert rep["max_resonant_coefficient"] < mpf(2) ** -64
        res = linearize_diagonal(h, rep["eta"][0], rep["eta"][1], 8,
                                 rc=rep["resonance"], precision_bits=256)
        assert res.obstruction is None
        conj = verify_conjugacy(h, res.phi, rep["eta"][0], rep["eta"][1], 8,
                                precision_bits=256)
        assert conj < mpf(10) ** -60
