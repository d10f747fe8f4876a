import numpy as np
import pytest
from hypothesis import given, strategies as st

from dualband_sched.baselines import PfState, schedule_pf_mrr, schedule_rr
from dualband_sched.channel import RadioConfig
from dualband_sched.model import ContextInfo, check_decision


def make_ctx(slot, classes, required):
    alive = {}
    for a, j in classes.items():
        if j >= slot and required[a] > 0:
            alive.setdefault(j, set()).add(a)
    loads = {a: required[a] for ids in alive.values() for a in ids}
    return ContextInfo(slot=slot, alive_classes=alive, required_loads=loads,
                       los_probs={a: 1.0 for a in loads})


CFG = RadioConfig(k1=6)


class TestPfMrr:
    def test_lone_due_app_wins_every_rb(self):
        ctx = make_ctx(1, {0: 1, 1: 3}, {0: 1e5, 1: 1e5})
        rates = {a: np.full(CFG.k1, 1e6) for a in (0, 1)}
        d = schedule_pf_mrr(ctx, rates, {0: 1e9, 1: 1e9}, PfState(), CFG, band="uw")
        assert d.g1 == {0}
        assert len(d.x) == CFG.k1

    def test_history_heavy_app_loses(self):
        ctx = make_ctx(1, {0: 1, 1: 1}, {0: 1e5, 1: 1e5})
        rates = {a: np.full(CFG.k1, 1e6) for a in (0, 1)}
        pf = PfState(avg_rate={0: 2e6, 1: 1e6})
        d = schedule_pf_mrr(ctx, rates, {}, pf, CFG, band="uw")
        assert d.g1 == {1}

    def test_per_rb_winners_match_exhaustive_argmax(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            ctx = make_ctx(2, {a: 2 for a in range(4)},
                           {a: float(rng.uniform(1e4, 1e6)) for a in range(4)})
            rates = {a: rng.uniform(1e5, 1e7, CFG.k1) for a in range(4)}
            pf = PfState(avg_rate={a: float(rng.uniform(1.0, 1e6)) for a in range(4)})
            d = schedule_pf_mrr(ctx, rates, {}, pf, CFG, band="uw")
            for k in range(CFG.k1):
                winner = d.rb_owner(k)
                metric = {
                    a: rates[a][k] / (pf.rate_of(a) + ctx.required_loads[a] / CFG.tau)
                    for a in range(4)
                }
                expected = min(
                    (a for a in range(4) if metric[a] == max(metric.values()))
                )
                assert winner == expected

    def test_mmw_descending_metric_until_budget(self):
        cfg = RadioConfig(k1=2, tau=1e-3, tau_prime=0.1e-3)
        ctx = make_ctx(2, {a: 3 for a in range(3)}, {a: 1e5 for a in range(3)})
        mmw = {0: 1e9, 1: 4e8, 2: 2e8}
        pf = PfState(avg_rate={a: 1.0 for a in range(3)})
        d = schedule_pf_mrr(ctx, {}, mmw, pf, cfg, band="mmw")
        # times: .1, .25, .5 ms plus .1 ms overhead each; the third breaks 1 ms
        assert d.g2 == {0, 1}
        assert d.tau[0] == pytest.approx(1e5 / 1e9)
        small = RadioConfig(k1=2, tau=0.5e-3, tau_prime=0.1e-3)
        d2 = schedule_pf_mrr(ctx, {}, mmw, pf, small, band="mmw")
        # only the best-metric app fits before the budget breaks
        assert d2.g2 == {0}

    def test_decision_feasible(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(1, 7))
            ctx = make_ctx(1, {a: int(rng.integers(1, 4)) for a in range(n)},
                           {a: float(rng.uniform(1e4, 1e7)) for a in range(n)})
            rates = {a: rng.uniform(1e4, 1e7, CFG.k1) for a in range(n)}
            mmw = {a: float(rng.uniform(1e8, 1e10)) for a in range(n)}
            d = schedule_pf_mrr(ctx, rates, mmw, PfState(), CFG)
            assert check_decision(d, CFG.k1, CFG.tau, CFG.tau_prime) == []

    def test_smoothing_update(self):
        pf = PfState(window=5.0, floor=1.0)
        pf.update({7: 1000.0}, {7}, tau=1.0)
        assert pf.rate_of(7) == pytest.approx(0.8 * 1.0 + 0.2 * 1000.0)
        pf.update({}, {7}, tau=1.0)
        assert pf.rate_of(7) == pytest.approx(0.8 * 200.8)


class TestRoundRobin:
    def test_single_app_takes_all(self):
        ctx = make_ctx(1, {0: 1}, {0: 1e5})
        d = schedule_rr(ctx, {0: np.ones(CFG.k1)}, {}, CFG, band="uw")
        assert len(d.x) == CFG.k1 and d.g1 == {0}

    def test_one_rb_each_when_full(self):
        n = CFG.k1
        ctx = make_ctx(1, {a: 1 for a in range(n)}, {a: 1e5 for a in range(n)})
        rates = {a: np.ones(CFG.k1) for a in range(n)}
        d = schedule_rr(ctx, rates, {}, CFG, band="uw")
        counts = {a: len(d.rbs_of(a)) for a in range(n)}
        assert all(c == 1 for c in counts.values())

    def test_fifty_over_seven_split(self):
        cfg = RadioConfig(k1=50)
        ctx = make_ctx(1, {a: 1 for a in range(7)}, {a: 1e5 for a in range(7)})
        rates = {a: np.ones(50) for a in range(7)}
        d = schedule_rr(ctx, rates, {}, cfg, band="uw")
        counts = sorted((len(d.rbs_of(a)) for a in range(7)), reverse=True)
        assert counts == [8, 7, 7, 7, 7, 7, 7]
        assert len(d.rbs_of(0)) == 8  # leftover goes to the lowest id

    @given(st.integers(1, 12), st.integers(1, 30))
    def test_split_matches_integer_division(self, n_apps, k1):
        cfg = RadioConfig(k1=k1)
        ctx = make_ctx(1, {a: 1 for a in range(n_apps)},
                       {a: 1e5 for a in range(n_apps)})
        rates = {a: np.ones(k1) for a in range(n_apps)}
        d = schedule_rr(ctx, rates, {}, cfg, band="uw")
        counts = [len(d.rbs_of(a)) for a in range(n_apps)]
        assert sum(counts) == k1
        assert max(counts) - min(counts) <= 1

    def test_mmw_equal_shares_saturate_slot(self):
        ctx = make_ctx(2, {a: 3 for a in range(4)}, {a: 1e6 for a in range(4)})
        mmw = {a: 1e9 for a in range(4)}
        d = schedule_rr(ctx, {}, mmw, CFG, band="mmw")
        assert d.g2 == {0, 1, 2, 3}
        share = (CFG.tau - 4 * CFG.tau_prime) / 4
        for a in range(4):
            assert d.tau[a] == pytest.approx(share)
        assert check_decision(d, CFG.k1, CFG.tau, CFG.tau_prime) == []

    def test_mmw_pool_capped_when_overhead_dominates(self):
        cfg = RadioConfig(tau=1e-3, tau_prime=0.4e-3)
        ctx = make_ctx(2, {a: 3 for a in range(5)}, {a: 1e6 for a in range(5)})
        mmw = {a: 1e9 for a in range(5)}
        d = schedule_rr(ctx, {}, mmw, cfg, band="mmw")
        assert d.g2 == {0, 1}  # only two training charges fit
        assert check_decision(d, cfg.k1, cfg.tau, cfg.tau_prime) == []

    def test_decision_feasible(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            ctx = make_ctx(1, {a: int(rng.integers(1, 4)) for a in range(n)},
                           {a: float(rng.uniform(1e4, 1e7)) for a in range(n)})
            rates = {a: rng.uniform(1e4, 1e7, CFG.k1) for a in range(n)}
            mmw = {a: float(rng.uniform(1e8, 1e10)) for a in range(n)}
            d = schedule_rr(ctx, rates, mmw, CFG)
            assert check_decision(d, CFG.k1, CFG.tau, CFG.tau_prime) == []
