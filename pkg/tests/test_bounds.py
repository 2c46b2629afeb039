import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmps.bounds import (
    BoundReport,
    check_theorem1,
    corollary2_eval,
    degree_growth,
    entropy_upper_bound,
    is_nondecreasing,
    lemma3_overlap_bound,
    rank2_fidelity_trend,
    rank_fidelity_trend,
    required_epsilon,
    theorem1_bound,
    verify_lemma2,
    verify_lemma3,
)
from fmps.entropy import entropy_profile
from fmps.exceptions import OutOfRange
from fmps.funcgrid import SMOOTH_FAMILIES, Domain, FunctionSpec, discretize, uniform_state

from conftest import gaussian_state


def test_bound_report_slack():
    up = BoundReport("x", 1.0, 0.5, "<=")
    assert up.slack == 0.5 and up.satisfied
    down = BoundReport("x", 1.0, 0.5, ">=")
    assert down.slack == -0.5 and not down.satisfied
    assert BoundReport("x", 1.0, 1.0 + 5e-10).satisfied
    assert not BoundReport("x", 1.0, 1.0 + 5e-9).satisfied


class TestEpsilonAndOverlap:
    def test_examples(self):
        assert required_epsilon(0.01, 11) == pytest.approx(0.003125, abs=1e-17)
        assert required_epsilon(0.5, 1) == pytest.approx(0.7071067811865476, abs=1e-16)
        assert lemma3_overlap_bound(0.0, 9) == 1.0
        for n in (1, 4, 10):
            assert lemma3_overlap_bound(2 ** (-(n - 1) / 2), n) == pytest.approx(0.0, abs=1e-15)
        assert lemma3_overlap_bound(0.003125, 11) == pytest.approx(0.99, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 5, 20])
    def test_halving(self, n):
        assert required_epsilon(0.2, n + 2) / required_epsilon(0.2, n) == pytest.approx(0.5, rel=1e-15)

    @pytest.mark.parametrize("delta,n", [(0.0, 3), (1.0, 3), (0.5, 0)])
    def test_out_of_range(self, delta, n):
        with pytest.raises(OutOfRange):
            required_epsilon(delta, n)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(1e-9, 0.999), st.integers(1, 40))
    def test_inverse_pair(self, delta, n):
        assert lemma3_overlap_bound(required_epsilon(delta, n), n) == pytest.approx(1 - delta, abs=1e-12)


class TestVerifyLemma3:
    def test_zero_eps(self):
        rep = verify_lemma3(gaussian_state(6), 20, 0.0, 0)
        assert rep.measured == pytest.approx(1.0, abs=1e-15)
        assert rep.satisfied and rep.params["violations"] == 0

    def test_uniform_shift_absorbed(self):
        f = uniform_state(4).values
        g = (f - 0.01) / np.linalg.norm(f - 0.01)
        np.testing.assert_allclose(g, f, atol=1e-15)

    def test_gaussian_seed42(self):
        rep = verify_lemma3(gaussian_state(8), 1000, 1e-3, 42)
        assert rep.satisfied
        assert rep.params["violations"] == 0
        assert rep.params["trials"] == 1000

    def test_deterministic(self):
        a = verify_lemma3(gaussian_state(7), 50, 1e-2, 3)
        b = verify_lemma3(gaussian_state(7), 50, 1e-2, 3)
        assert a == b

    @pytest.mark.parametrize("family", ["gaussian", "sine", "exponential", "lognormal", "polynomial",
                                        "linear-ramp", "constant", "step"])
    @pytest.mark.parametrize("n", [3, 12])
    def test_no_counterexample(self, family, n):
        state = discretize(FunctionSpec(family), None, n)
        for eps in (1e-2, 1e-4):
            assert verify_lemma3(state, 40, eps, 11).params["violations"] == 0


def test_lemma2_reports():
    sat, rand = verify_lemma2(10, 200, 0)
    assert sat.measured == pytest.approx(32.0, abs=1e-12)
    assert sat.satisfied and rand.satisfied
    assert rand.measured < 32.0


class TestEntropyBound:
    def test_example(self):
        assert entropy_upper_bound(11, 0.25, 1.0, 2.0) == pytest.approx(math.log2(7), abs=1e-12)

    @pytest.mark.parametrize("n", [4, 16, 64, 256])
    def test_logarithmic_growth(self, n):
        a = entropy_upper_bound(n, 0.01, 1.0, 8.0)
        b = entropy_upper_bound(4 * n, 0.01, 1.0, 8.0)
        assert 0 < b - a < 3.0

    def test_near_constant_limit(self):
        vals = [entropy_upper_bound(10, 0.01, g, 1.0) for g in (1e-2, 1e-8, 1e-32, 1e-128)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.1

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            entropy_upper_bound(10, 1.5, 1.0, 1.0)


class TestTheorem1:
    def test_uniform(self):
        rep = check_theorem1(entropy_profile(uniform_state(6)), 2.5)
        assert rep.satisfied and rep.slack == 2.5

    def test_ramp_degree_one_path(self):
        spec = FunctionSpec("linear-ramp")
        bound = theorem1_bound(spec, None, 10, 0.01)
        assert bound == pytest.approx(1.0)
        assert check_theorem1(entropy_profile(discretize(spec, None, 10)), bound).satisfied

    def test_step_is_control(self):
        assert theorem1_bound(FunctionSpec("step"), None, 10, 0.01) is None

    @pytest.mark.parametrize("family", SMOOTH_FAMILIES)
    @pytest.mark.parametrize("n", [4, 8, 12, 14])
    def test_smooth_families_pass(self, family, n):
        spec = FunctionSpec(family)
        bound = theorem1_bound(spec, None, n, 0.01)
        rep = check_theorem1(entropy_profile(discretize(spec, None, n)), bound, family=family)
        assert rep.satisfied, rep

    def test_gaussian_n12_recorded(self):
        dom = Domain(-4, 4)
        bound = theorem1_bound(FunctionSpec("gaussian"), dom, 12, 0.01)
        assert bound == pytest.approx(entropy_upper_bound(12, 0.01, 1.0, 8.0))
        rep = check_theorem1(entropy_profile(gaussian_state(12)), bound)
        assert rep.params["N"] == 12 and rep.satisfied


class TestCorollary2:
    def test_example(self):
        c = corollary2_eval(16, delta=1.0)
        assert c.trace_lower == pytest.approx(0.4759193652572005, abs=1e-15)
        assert c.trace_lower == pytest.approx(2 * math.log2(14) / 16, abs=1e-15)

    def test_identity(self):
        c = corollary2_eval(40)
        assert c.fidelity_upper**2 + c.trace_lower**2 == pytest.approx(1.0, abs=1e-12)

    def test_limit(self):
        c = corollary2_eval(10**9)
        assert c.trace_lower < 1e-7 and c.fidelity_upper == pytest.approx(1.0)

    def test_constants(self):
        c = corollary2_eval(20, 0.01, C0=1.0, C1=0.0, C2=2.0)
        assert c.A == 2.0
        assert c.B == pytest.approx(-math.log2(0.01) - 2.0)

    @pytest.mark.parametrize("kwargs", [{"C2": 1.0}, {"delta": 0.0}, {"C1": -100.0}])
    def test_out_of_range(self, kwargs):
        with pytest.raises(OutOfRange):
            corollary2_eval(8, **kwargs)

    def test_fidelity_upper_monotone_past_threshold(self):
        vals = [corollary2_eval(n).fidelity_upper for n in range(1, 400)]
        start = next(i for i, v in enumerate(vals) if v > 0)
        # once the clamp releases, the trace term keeps shrinking
        peak = int(np.argmax(np.array([corollary2_eval(n).trace_lower for n in range(1, 400)])))
        assert is_nondecreasing(vals[max(start, peak):])


class TestTrends:
    def test_ramp_and_constant_exact(self):
        for fam in ("linear-ramp", "constant"):
            rows = rank2_fidelity_trend(FunctionSpec(fam), None, [4, 6, 8, 10])
            assert all(r.fidelity == pytest.approx(1.0, abs=1e-10) for r in rows)

    def test_gaussian_trend(self):
        rows = rank2_fidelity_trend(FunctionSpec("gaussian"), Domain(-4, 4), [8, 10, 12, 14])
        fids = [r.fidelity for r in rows]
        assert is_nondecreasing(fids, 1e-3)
        np.testing.assert_allclose(fids, [0.9993477534890091, 0.999346939648087, 0.9993468887721175,
                                          0.9993468855923265], atol=1e-9)

    def test_mps_path_matches_dense(self):
        a = rank_fidelity_trend(FunctionSpec("sine"), None, [10], chi=3, dense_cap=16)
        b = rank_fidelity_trend(FunctionSpec("sine"), None, [10], chi=3, dense_cap=4)
        assert a[0].s_max == pytest.approx(b[0].s_max, abs=1e-10)

    def test_requires_ascending(self):
        with pytest.raises(ValueError):
            rank_fidelity_trend(FunctionSpec("sine"), None, [8, 6])

    def test_is_nondecreasing(self):
        assert is_nondecreasing([1, 2, 2, 3])
        assert not is_nondecreasing([1, 0.999])
        assert is_nondecreasing([1, 0.9995], 1e-3)


def test_degree_growth_fields():
    g = degree_growth(FunctionSpec("exponential"), Domain(0, 1), [1e-2, 1e-4, 1e-6, 1e-8], 10)
    assert g.degrees == (1, 3, 4, 6)
    assert g.predicted_slope == pytest.approx(1 / math.log2(3))
    assert g.slope > 0
    assert np.all(np.abs(g.residuals) < 2)
    assert g.slope <= g.predicted_slope
