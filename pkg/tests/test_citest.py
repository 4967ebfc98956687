import math

import numpy as np
import pytest
from scipy.stats import chi2 as scipy_chi2

from histcmi import (
    InputError,
    ScenarioSpec,
    VariableGroup,
    chi2_critical,
    citest_chi2,
    citest_sc,
    generate,
    replicate_seed,
)

X = VariableGroup("X", (0,))
Y = VariableGroup("Y", (1,))
Z = VariableGroup("Z", (2,))


class TestChi2Critical:
    def test_known_values(self):
        assert chi2_critical(0.01, 1) == pytest.approx(6.6349, abs=1e-4)
        # df = 2 has the closed form -2 ln(alpha)
        assert chi2_critical(0.05, 2) == pytest.approx(-2.0 * math.log(0.05), abs=1e-9)

    def test_alpha_near_one_gives_zero_quantile(self):
        assert chi2_critical(1.0 - 1e-9, 3) < 1e-2

    def test_matches_scipy_ppf(self):
        for alpha in (0.2, 0.05, 0.01, 0.001):
            for df in (1, 2, 5, 30, 240):
                assert chi2_critical(alpha, df) == pytest.approx(
                    scipy_chi2.ppf(1 - alpha, df), abs=1e-7)

    def test_rejects_bad_inputs(self):
        for alpha in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(InputError):
                chi2_critical(alpha, 3)
        with pytest.raises(InputError):
            chi2_critical(0.05, 0)


class TestChi2Test:
    def test_constant_column_is_independent_of_everything(self):
        rng = np.random.default_rng(0)
        data = np.column_stack([np.full(200, 3.0), rng.normal(size=200)])
        res = citest_chi2(data, X, Y, alpha=0.01)
        assert res.independent
        assert res.corrected == 0.0
        assert res.correction == 0.0
        assert res.detail["df"] == 0

    def test_markov_chain_accepted_as_independent(self):
        hits = 0
        for rep in range(30):
            ds = generate(ScenarioSpec("exp4", 1000, replicate_seed(100, rep)))
            hits += citest_chi2(ds.data, X, Y, Z, alpha=0.01).independent
        assert hits >= 27

    def test_xor_scaled_collider_detected_at_400(self):
        hits = 0
        for rep in range(30):
            ds = generate(ScenarioSpec("collider5", 400, replicate_seed(101, rep)))
            hits += not citest_chi2(ds.data, X, Y, Z, alpha=0.01).independent
        assert hits >= 27

    def test_correction_nonpositive_and_verdict_consistent(self):
        ds = generate(ScenarioSpec("exp5", 600, 7))
        res = citest_chi2(ds.data, X, Y, Z, alpha=0.05)
        assert res.correction <= 0.0
        assert res.corrected == max(0.0, res.raw + res.correction)
        assert res.independent == (res.corrected == 0.0)

    def test_corrected_value_monotone_in_alpha(self):
        ds = generate(ScenarioSpec("exp5", 1000, 3))
        values = [citest_chi2(ds.data, X, Y, Z, alpha=a).corrected
                  for a in (0.001, 0.01, 0.05, 0.2)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_determinism(self):
        ds = generate(ScenarioSpec("exp4", 500, 9))
        r1 = citest_chi2(ds.data, X, Y, Z, alpha=0.01)
        r2 = citest_chi2(ds.data, X, Y, Z, alpha=0.01)
        assert (r1.raw, r1.correction, r1.corrected, r1.independent) == \
               (r2.raw, r2.correction, r2.corrected, r2.independent)

    def test_rejects_bad_alpha(self):
        ds = generate(ScenarioSpec("exp4", 100, 0))
        with pytest.raises(InputError):
            citest_chi2(ds.data, X, Y, Z, alpha=1.5)


class TestScTest:
    def test_two_constant_columns(self):
        data = np.column_stack([np.full(50, 1.0), np.full(50, 2.0)])
        res = citest_sc(data, X, Y)
        assert res.independent
        assert res.correction == 0.0
        assert res.corrected == 0.0

    def test_correction_negative_on_fitted_instances(self):
        for scenario, rep in (("exp4", 0), ("exp5", 1), ("exp1", 2)):
            ds = generate(ScenarioSpec(scenario, 400, rep))
            z = Z if len(ds.names) == 3 else None
            res = citest_sc(ds.data, X, Y, z)
            assert res.correction <= 0.0
            assert not res.sc_correction_clamped

    def test_markov_chain_high_independence_recall(self):
        hits = 0
        for rep in range(30):
            ds = generate(ScenarioSpec("exp4", 1000, replicate_seed(102, rep)))
            hits += citest_sc(ds.data, X, Y, Z).independent
        assert hits >= 29  # the SC correction is the more conservative test

    def test_detects_strong_dependence(self):
        ds = generate(ScenarioSpec("exp5", 1000, 3))
        assert not citest_sc(ds.data, X, Y, Z).independent
