import itertools
import math

import numpy as np
import pytest

from dualband_sched.analytics import (
    OutageStats,
    l1_poisson_gap,
    lecam_bound,
    outage_probability,
    poisson_binomial_pmf,
    poisson_cdf,
    poisson_outage_cdf,
)
from dualband_sched.model import UserApp


def app_with(total, received, qos_class=1):
    app = UserApp(id=0, ue_id=0, qos_class=qos_class, total_bits=total)
    app.begin_slot()
    app.credit(received)
    return app


def enumerated_pmf(rhos):
    """Exact success-count law by enumerating all outcome combinations."""
    n = len(rhos)
    pmf = np.zeros(n + 1)
    for outcome in itertools.product((0, 1), repeat=n):
        p = 1.0
        for draw, rho in zip(outcome, rhos):
            p *= rho if draw else (1.0 - rho)
        pmf[sum(outcome)] += p
    return pmf


class TestOutageProbability:
    def test_all_satisfied(self):
        apps = [app_with(100.0, 100.0) for _ in range(5)]
        assert outage_probability(apps) == 0.0

    def test_none_satisfied(self):
        apps = [app_with(100.0, 10.0) for _ in range(5)]
        assert outage_probability(apps) == 1.0

    def test_ratio(self):
        apps = [app_with(100.0, 100.0) for _ in range(81)]
        apps += [app_with(100.0, 0.0) for _ in range(9)]
        assert outage_probability(apps) == pytest.approx(0.1)

    def test_empty_population_rejected(self):
        with pytest.raises(ValueError):
            outage_probability([])


class TestPoissonOutageCdf:
    def test_zero_rhos_give_zero(self):
        assert poisson_outage_cdf(0.3, 10, 5, [0.0, 0.0]) == pytest.approx(0.0)

    def test_hand_computed_case(self):
        # floor((1 - 0.3) * 10 - 5) = 2 extra successes needed, mean 2
        got = poisson_outage_cdf(0.3, 10, 5, [1.0, 1.0])
        expected = 1.0 - math.exp(-2.0) * (1.0 + 2.0 + 2.0)
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.3233, abs=5e-5)

    def test_threshold_domain_enforced(self):
        with pytest.raises(ValueError):
            poisson_outage_cdf(0.5, 10, 5, [1.0])
        with pytest.raises(ValueError):
            poisson_outage_cdf(-0.1, 10, 5, [1.0])
        with pytest.raises(ValueError):
            poisson_outage_cdf(0.1, 0, 0, [1.0])

    def test_non_decreasing_in_threshold(self):
        rhos = [0.3, 0.9, 0.5, 0.7]
        grid = np.linspace(0.0, 0.399, 40)
        values = [poisson_outage_cdf(p, 20, 12, rhos) for p in grid]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))

    def test_poisson_cdf_identity(self):
        # regularized upper incomplete gamma equals the direct sum
        for k, lam in [(0, 0.5), (3, 2.0), (7, 4.5)]:
            direct = sum(math.exp(-lam) * lam**i / math.factorial(i) for i in range(k + 1))
            assert poisson_cdf(k, lam) == pytest.approx(direct, rel=1e-12)
        assert poisson_cdf(-1, 2.0) == 0.0
        assert poisson_cdf(5, 0.0) == 1.0


class TestLeCam:
    def test_zero_vector(self):
        assert lecam_bound([0.0]) == 0.0

    def test_arithmetic(self):
        assert lecam_bound([0.1, 0.2]) == pytest.approx(0.1)

    def test_pmf_matches_enumeration(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            rhos = rng.uniform(0.0, 1.0, n).tolist()
            fast = poisson_binomial_pmf(rhos)
            slow = enumerated_pmf(rhos)
            assert np.allclose(fast, slow, atol=1e-12)

    def test_poisson_gap_within_bound(self):
        rng = np.random.default_rng(18)
        for _ in range(30):
            n = int(rng.integers(1, 13))
            rhos = rng.uniform(0.0, 0.9, n).tolist()
            assert l1_poisson_gap(rhos) <= lecam_bound(rhos) + 1e-12

    def test_small_rho_case_tight(self):
        rhos = [0.05] * 10
        gap = l1_poisson_gap(rhos)
        assert gap <= lecam_bound(rhos) == pytest.approx(0.05)

    def test_success_count_mean_matches_rho_sum(self):
        # the mmW success count averages to the summed LoS probabilities
        rng = np.random.default_rng(19)
        rhos = np.array([0.9, 0.2, 0.55, 0.7, 1.0, 0.05])
        draws = (rng.random((100_000, rhos.size)) < rhos).sum(axis=1)
        se = float(np.std(draws) / math.sqrt(draws.size))
        assert abs(float(np.mean(draws)) - rhos.sum()) <= 3 * se


class TestOutageStats:
    def test_validation(self):
        stats = OutageStats(sat_uw=[1], sat_mmw=[1], due_counts=[3], p_out=0.2)
        stats.validate()
        bad = OutageStats(sat_uw=[2], sat_mmw=[2], due_counts=[3], p_out=0.2)
        with pytest.raises(ValueError):
            bad.validate()
        with pytest.raises(ValueError):
            OutageStats(p_out=1.5).validate()
