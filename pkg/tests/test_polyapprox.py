import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev

from fmps.bounds import required_epsilon
from fmps.exceptions import DegreeCapExceeded, DimensionMismatch, InvalidTolerance
from fmps.funcgrid import Domain, FunctionSpec, discretize, grid_points
from fmps.polyapprox import (
    ChebyshevPoly,
    chebyshev_nodes,
    degree_for_overlap,
    degree_for_overlap_value,
    fit_chebyshev,
    linf_error,
    minimal_degree_search,
    required_degree,
    required_degree_value,
)

UNIT = Domain(0.0, 1.0)


class TestFit:
    @pytest.mark.parametrize("p", [0, 1, 4, 9])
    def test_constant_reproduced(self, p):
        poly = fit_chebyshev(FunctionSpec("constant", {"value": 2.5}), UNIT, p)
        expected = np.zeros(p + 1)
        expected[0] = 2.5
        np.testing.assert_allclose(poly.coeffs, expected, atol=1e-14)
        assert poly.degree == p

    def test_identity_is_t1(self):
        poly = fit_chebyshev(FunctionSpec("linear-ramp"), Domain(-1, 1), 1)
        np.testing.assert_allclose(poly.coeffs, [0.0, 1.0], atol=1e-15)

    def test_exp_degree6_dense_error(self):
        poly = fit_chebyshev(FunctionSpec("exponential"), UNIT, 6)
        x = np.linspace(0, 1, 100001)
        err = np.max(np.abs(poly(x) - np.exp(x)))
        # dense-scan oracle gave 4.283e-08
        assert err == pytest.approx(4.283e-08, rel=1e-3)
        assert err <= 1e-6

    @pytest.mark.parametrize("family", ["gaussian", "sine", "exponential", "lognormal"])
    @pytest.mark.parametrize("p", [3, 8, 15])
    def test_matches_numpy_interpolation(self, family, p):
        spec = FunctionSpec(family)
        dom = spec.default_domain()
        ours = fit_chebyshev(spec, dom, p)
        theirs = chebyshev.Chebyshev.interpolate(spec, p, domain=[dom.lo, dom.hi])
        np.testing.assert_allclose(ours.coeffs, theirs.coef, atol=1e-12)

    def test_interpolates_at_nodes(self):
        spec = FunctionSpec("sine")
        dom = spec.default_domain()
        poly = fit_chebyshev(spec, dom, 7)
        x = dom.lo + 0.5 * (chebyshev_nodes(8) + 1) * dom.width
        np.testing.assert_allclose(poly(x), spec(x), atol=1e-12)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            fit_chebyshev(FunctionSpec("sine"), None, -1)

    def test_coefficients_read_only(self):
        poly = ChebyshevPoly(UNIT, [1.0, 2.0])
        with pytest.raises(ValueError):
            poly.coeffs[0] = 5.0


class TestLinfError:
    def test_exact_polynomial_is_zero(self):
        spec = FunctionSpec("polynomial", {"c0": 0.3, "c1": -1.0, "c2": 0.5, "c3": 2.0})
        poly = fit_chebyshev(spec, None, 3)
        assert linf_error(poly, spec, 9) == pytest.approx(0.0, abs=1e-12)

    def test_degree0_ramp(self):
        poly = fit_chebyshev(FunctionSpec("linear-ramp"), UNIT, 0)
        # normalized ramp (0..7)/sqrt(140) vs uniform 1/sqrt(8), largest gap at index 7
        assert linf_error(poly, FunctionSpec("linear-ramp"), 3) == pytest.approx(0.35355339059327373, abs=1e-15)

    def test_gaussian_degree10_beats_degree4(self, gaussian, gauss_domain):
        e10 = linf_error(fit_chebyshev(gaussian, gauss_domain, 10), gaussian, 8)
        e4 = linf_error(fit_chebyshev(gaussian, gauss_domain, 4), gaussian, 8)
        assert e10 < e4
        assert e10 == pytest.approx(0.0012594, rel=1e-4)

    def test_state_target(self, gaussian, gauss_domain):
        state = discretize(gaussian, gauss_domain, 7)
        poly = fit_chebyshev(gaussian, gauss_domain, 6)
        assert linf_error(poly, state) == linf_error(poly, gaussian, 7)

    def test_mismatches(self, gaussian, gauss_domain):
        state = discretize(gaussian, gauss_domain, 7)
        with pytest.raises(DimensionMismatch):
            linf_error(fit_chebyshev(gaussian, gauss_domain, 3), state, 6)
        with pytest.raises(DimensionMismatch):
            linf_error(fit_chebyshev(gaussian, Domain(-3, 3), 3), state)


# Interpolants at odd degree of an even function (and lognormal at low degree)
# can be slightly worse than the preceding even degree.
PARITY_COUNTEREXAMPLES = {"gaussian", "lognormal"}


@pytest.mark.parametrize(
    "family",
    [
        pytest.param(f, marks=pytest.mark.xfail(strict=True, reason="interpolation error not monotone in degree"))
        if f in PARITY_COUNTEREXAMPLES else f
        for f in ("gaussian", "sine", "exponential", "lognormal", "polynomial", "linear-ramp", "constant")
    ],
)
def test_error_non_increasing_in_degree(family):
    spec = FunctionSpec(family)
    errs = [linf_error(fit_chebyshev(spec, None, p), spec, 8) for p in range(0, 16)]
    assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))


def test_gaussian_even_degree_errors_non_increasing(gaussian, gauss_domain):
    errs = [linf_error(fit_chebyshev(gaussian, gauss_domain, p), gaussian, 8) for p in range(0, 30, 2)]
    assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))


class TestDegreeFormulas:
    def test_examples(self):
        assert required_degree(0.5, 1.0, 2.0) == 1
        assert required_degree(2.0**-10, 1.0, 2.0) == 10
        assert required_degree(0.1, 1e-9, 1.0) == 1
        assert required_degree_value(0.1, 1e-12, 1.0) < 0.1
        assert required_degree(0.1, 0.0, 1.0) == 0
        assert degree_for_overlap(0.25, 11, 1.0, 2.0) == 6
        assert degree_for_overlap(0.5, 2, 1.0, 2.0) == 1

    def test_offset_added(self):
        assert required_degree(0.5, 1.0, 2.0, offset=3) == 4

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 2.0])
    def test_invalid_eps(self, eps):
        with pytest.raises(InvalidTolerance):
            required_degree(eps, 1.0, 1.0)

    @pytest.mark.parametrize("delta", [0.0, 1.0])
    def test_invalid_delta(self, delta):
        with pytest.raises(InvalidTolerance):
            degree_for_overlap(delta, 4, 1.0, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-12, 0.9), st.floats(0.01, 50), st.floats(0.01, 50))
    def test_squaring_eps_doubles_log_term(self, eps, gamma, width):
        a = required_degree_value(eps, gamma, width)
        b = required_degree_value(eps * eps, gamma, width)
        assert b == pytest.approx(2 * a, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-6, 0.5), st.integers(1, 30), st.integers(1, 30), st.floats(0.05, 20))
    def test_overlap_degree_linear_in_n(self, delta, n, dn, gw):
        a = degree_for_overlap_value(delta, n, 1.0, gw)
        b = degree_for_overlap_value(delta, n + dn, 1.0, gw)
        assert b - a == pytest.approx(dn / (2 * math.log2(1 + 2 / gw)), rel=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-6, 0.99), st.integers(1, 30), st.floats(0.05, 20))
    def test_overlap_degree_matches_required_epsilon(self, delta, n, gw):
        direct = degree_for_overlap(delta, n, 1.0, gw)
        eps = required_epsilon(delta, n)
        if eps >= 1.0:
            return
        assert abs(required_degree(eps, 1.0, gw) - direct) <= 1


class TestMinimalDegree:
    def test_cubic_exact(self):
        spec = FunctionSpec("polynomial")
        assert minimal_degree_search(spec, None, 1e-12, 8).degree <= 3

    @pytest.mark.parametrize("eps", [0.5, 1e-3, 1e-10])
    def test_constant_is_degree0(self, eps):
        assert minimal_degree_search(FunctionSpec("constant", {"value": 4.0}), None, eps, 6).degree == 0

    def test_exp_growth_between_tolerances(self):
        spec = FunctionSpec("exponential")
        lo = minimal_degree_search(spec, UNIT, 1e-3, 10)
        hi = minimal_degree_search(spec, UNIT, 1e-6, 10)
        assert (lo.degree, hi.degree) == (2, 4)
        alpha = 1 + 2 / (1.0 * 1.0)
        assert 0 < hi.degree - lo.degree <= math.ceil(math.log2(1e3) / math.log2(alpha))

    @pytest.mark.parametrize("family", ["gaussian", "sine", "exponential", "lognormal"])
    @pytest.mark.parametrize("eps", [1e-2, 1e-5])
    def test_result_meets_its_tolerance(self, family, eps):
        spec = FunctionSpec(family)
        rep = minimal_degree_search(spec, None, eps, 9)
        assert rep.linf_error <= eps
        assert linf_error(fit_chebyshev(spec, None, rep.degree), spec, 9) <= eps
        assert rep.grid_n == 9

    def test_cap(self):
        with pytest.raises(DegreeCapExceeded):
            minimal_degree_search(FunctionSpec("step"), None, 1e-6, 8, cap=10)

    def test_nonpositive_eps(self):
        with pytest.raises(InvalidTolerance):
            minimal_degree_search(FunctionSpec("sine"), None, 0.0, 4)


def test_grid_helper_consistency():
    poly = fit_chebyshev(FunctionSpec("sine"), None, 12)
    x = grid_points(poly.domain, 5)
    np.testing.assert_allclose(poly(x), poly.as_numpy()(x), atol=1e-12)
