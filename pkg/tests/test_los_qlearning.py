import numpy as np
import pytest

from dualband_sched.los_qlearning import (
    BandDecision,
    BandState,
    QlConfig,
    QTable,
    classify,
    learn_step,
    q_update,
    rho_threshold,
    train,
    transition,
)

S1, S2, S3 = BandState.MMW_LOS, BandState.MMW_BLOCKED, BandState.UW_SERVED
D1, D2 = BandDecision.STAY, BandDecision.SWITCH


class TestRhoThreshold:
    def test_default_rewards(self):
        assert rho_threshold((3.0, -16.0, 1.0)) == pytest.approx(17.0 / 19.0)

    def test_equal_rewards_rejected(self):
        with pytest.raises(ValueError):
            rho_threshold((2.0, -2.0, 2.0))

    def test_direct_arithmetic(self):
        # magnitudes (2, 3, 0.5) -> (0.5 + 3) / (2 + 3)
        assert rho_threshold((2.0, -3.0, 0.5)) == pytest.approx(3.5 / 5.0)

    def test_wrong_sign_rejected(self):
        with pytest.raises(ValueError):
            rho_threshold((3.0, 16.0, 1.0))
        with pytest.raises(ValueError):
            rho_threshold((1.0, -16.0, 3.0))


class TestTransition:
    def test_switch_from_mmw_lands_on_uw(self):
        for s in (S1, S2):
            for draw in (0, 1):
                assert transition(s, D2, draw) == S3

    def test_stay_on_uw_stays(self):
        for draw in (0, 1):
            assert transition(S3, D1, draw) == S3

    def test_mmw_bound_moves_follow_los_draw(self):
        for s in (S1, S2):
            assert transition(s, D1, 1) == S1
            assert transition(s, D1, 0) == S2
        assert transition(S3, D2, 1) == S1
        assert transition(S3, D2, 0) == S2


class TestQUpdate:
    def test_zero_learning_rate_freezes_table(self):
        table = QTable(cfg=QlConfig(alpha=0.0, alpha_power=0.0))
        table.q[:] = 7.0
        q_update(table, S1, D1, S2)
        assert np.all(table.q == 7.0)

    def test_full_overwrite_with_no_discount(self):
        table = QTable(cfg=QlConfig(alpha=1.0, alpha_power=0.0, gamma=0.0))
        q_update(table, S3, D2, S2)
        assert table.q[S3, D2] == -16.0
        q_update(table, S3, D2, S1)
        assert table.q[S3, D2] == 3.0

    def test_single_step_hand_value(self):
        table = QTable(cfg=QlConfig(alpha=0.1, alpha_power=0.0, gamma=0.9))
        q_update(table, S3, D2, S1)
        # (1 - 0.1) * 0 + 0.1 * (3 + 0.9 * 0)
        assert table.q[S3, D2] == pytest.approx(0.3)

    def test_visit_decay_schedule(self):
        table = QTable(cfg=QlConfig(alpha=1.0, alpha_power=0.85))
        assert table.learning_rate(S1, D1) == pytest.approx(1.0)
        table.visits[S1, D1] = 15
        assert table.learning_rate(S1, D1) == pytest.approx(1.0 / 16**0.85)


class TestClassify:
    def test_zero_table_passes_weak_inequalities(self):
        assert classify(QTable()) is True

    def test_high_rho_learns_mmw_preference(self):
        hits = sum(
            classify(train(0.95, 2000, QlConfig(), np.random.default_rng(s)))
            for s in range(25)
        )
        assert hits >= 22

    def test_mid_rho_learns_uw_preference(self):
        hits = sum(
            not classify(train(0.5, 2000, QlConfig(), np.random.default_rng(s)))
            for s in range(25)
        )
        assert hits >= 22

    def test_decision_flips_across_threshold_sweep(self):
        # threshold is ~0.895; the near-threshold point is excluded
        for rho, want in [(0.70, False), (0.80, False), (0.95, True)]:
            votes = sum(
                classify(train(rho, 2000, QlConfig(), np.random.default_rng(s)))
                for s in range(15)
            )
            assert (votes > 7) == want, f"rho={rho}: {votes}/15 mmW votes"


class TestLearningDynamics:
    def test_always_mmw_long_run_reward(self):
        # staying on mmW forever earns r1*rho - (1-rho)*r2 per step on average
        rng = np.random.default_rng(0)
        rho = 0.8
        rewards = []
        state = S1
        for _ in range(200_000):
            state = transition(state, D1, int(rng.random() < rho))
            rewards.append(3.0 if state == S1 else -16.0)
        expected = 3.0 * rho - (1.0 - rho) * 16.0
        assert np.mean(rewards) == pytest.approx(expected, abs=0.15)

    def test_q_values_bounded(self):
        bound = 16.0 / (1.0 - 0.9)
        for seed, rho in [(1, 0.1), (2, 0.5), (3, 0.9), (4, 1.0)]:
            table = train(rho, 3000, QlConfig(), np.random.default_rng(seed))
            assert np.max(np.abs(table.q)) <= bound

    def test_learn_step_advances_state_and_counts(self):
        table = QTable()
        rng = np.random.default_rng(5)
        for _ in range(10):
            learn_step(table, 1, rng)
        assert table.steps == 10
        assert int(table.visits.sum()) == 10

    def test_eps_greedy_mode_still_runs(self):
        cfg = QlConfig(exploration="eps_greedy")
        table = train(0.9, 500, cfg, np.random.default_rng(6))
        assert table.steps == 500


class TestConfigValidation:
    def test_defaults_valid(self):
        QlConfig().validate()

    def test_bad_exploration_rejected(self):
        with pytest.raises(ValueError):
            QlConfig(exploration="ucb").validate()

    def test_bad_gamma_rejected(self):
        with pytest.raises(ValueError):
            QlConfig(gamma=1.0).validate()

    def test_bad_reward_ordering_rejected(self):
        with pytest.raises(ValueError):
            QlConfig(rewards=(1.0, -16.0, 3.0)).validate()
