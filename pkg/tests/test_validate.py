import pytest

from bitalias.errors import DomainError
from bitalias.qualification import AliasLimits
from bitalias.validate import (CoverageParams, QualificationParams,
                               monte_carlo_validate)

LIMITS = AliasLimits(0.45, 0.55)


class TestMonteCarloValidate:
    def test_coverage_exact_interval_meets_nominal(self):
        est = monte_carlo_validate(
            "coverage", CoverageParams("clopper_pearson", p=0.5, devices=100, alpha=0.05),
            trials=20_000, seed=11)
        assert est.value >= 0.95 - 3 * est.std_error

    def test_wilson_mean_coverage_near_nominal(self):
        grid = [0.05 + 0.1 * i for i in range(10)]
        values = []
        for task, p in enumerate(grid):
            est = monte_carlo_validate(
                "coverage", CoverageParams("wilson", p=p, devices=50, alpha=0.05),
                trials=20_000, seed=11, task=task)
            values.append(est.value)
        assert abs(sum(values) / len(values) - 0.95) < 0.02

    def test_far_bounded_by_alpha(self):
        est = monte_carlo_validate(
            "far", QualificationParams(devices=680, limits=LIMITS, alpha=0.01, p=0.55),
            trials=20_000, seed=5)
        assert est.value <= 0.01 + 3 * est.std_error

    def test_far_zero_on_empty_region(self):
        est = monte_carlo_validate(
            "far", QualificationParams(devices=10, limits=LIMITS, alpha=0.01, p=0.5),
            trials=1000, seed=5)
        assert est.value == 0.0

    def test_frr_complements_acceptance(self):
        params = QualificationParams(devices=680, limits=LIMITS, alpha=0.01, p=0.5)
        far = monte_carlo_validate("far", params, trials=10_000, seed=9)
        frr = monte_carlo_validate("frr", params, trials=10_000, seed=9)
        assert far.value + frr.value == pytest.approx(1.0, abs=1e-12)

    def test_reproducible_for_fixed_seed(self):
        params = CoverageParams("normal", p=0.3, devices=40, alpha=0.05)
        a = monte_carlo_validate("coverage", params, trials=5000, seed=21)
        b = monte_carlo_validate("coverage", params, trials=5000, seed=21)
        assert a.value == b.value

    def test_standard_error_formula(self):
        est = monte_carlo_validate(
            "coverage", CoverageParams("wilson", p=0.5, devices=30, alpha=0.05),
            trials=5000, seed=2)
        assert est.std_error == pytest.approx(
            (est.value * (1 - est.value) / est.trials) ** 0.5, abs=1e-15)

    def test_rejects_small_trial_counts(self):
        with pytest.raises(DomainError):
            monte_carlo_validate(
                "coverage", CoverageParams("wilson", p=0.5, devices=30, alpha=0.05),
                trials=999, seed=1)

    def test_rejects_unknown_kind(self):
        with pytest.raises(DomainError):
            monte_carlo_validate(
                "volume", CoverageParams("wilson", p=0.5, devices=30, alpha=0.05),
                trials=5000, seed=1)
