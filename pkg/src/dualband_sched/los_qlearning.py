"""Per-UE tabular Q-learning that decides, without knowing the blockage
probability, whether a UE's mmW link is reliable enough to prefer that band.

The learner watches a three-state process: served over an unblocked mmW link,
scheduled on mmW but blocked, or served on the microwave band. At each step it
either stays on the current band or switches. Staying on (or switching to)
mmW lands in the unblocked state with the UE's LoS probability; the microwave
state is deterministic. Rewards are positive for both served states (larger
for mmW), negative for the blocked state, which fixes the exact probability
threshold above which mmW is the long-run-better band.

Updates are off-policy, so the behavior policy is free. The default behavior
is a fixed stochastic probe that spends most of its time circulating through
the mmW states, where all the uncertainty lies; the blocked state is rare for
reliable links, and an epsilon-greedy walk visits it too seldom to classify
dependably within a couple thousand steps. Epsilon-greedy remains available
as a config option.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class BandState(IntEnum):
    MMW_LOS = 0
    MMW_BLOCKED = 1
    UW_SERVED = 2


class BandDecision(IntEnum):
    STAY = 0
    SWITCH = 1


@dataclass
class QlConfig:
    """Learning hyperparameters.

    ``rewards`` is the signed reward vector for the three states. The
    learning rate for a state-decision pair decays with its visit count as
    alpha / (1 + n)**alpha_power; set alpha_power to 0 for a constant rate.
    ``exploration`` picks the behavior policy: the band-circulation ``probe``
    (moves toward the mmW band with probability ``probe_bias``) or
    ``eps_greedy`` with a linear epsilon decay.
    """

    rewards: tuple[float, float, float] = (3.0, -16.0, 1.0)
    alpha: float = 1.0
    alpha_power: float = 0.85
    gamma: float = 0.9
    exploration: str = "probe"
    probe_bias: float = 0.85
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_decay_steps: int = 1000
    pretrain_steps: int = 2000

    def validate(self) -> None:
        reward_magnitudes(self.rewards)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("learning rate must be in [0, 1]")
        if self.alpha_power < 0.0:
            raise ValueError("alpha_power must be non-negative")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("discount must be in [0, 1)")
        if self.exploration not in ("probe", "eps_greedy"):
            raise ValueError(f"unknown exploration policy {self.exploration!r}")
        if not 0.0 < self.probe_bias < 1.0:
            raise ValueError("probe_bias must be in (0, 1)")
        if not 0.0 <= self.eps_end <= self.eps_start <= 1.0:
            raise ValueError("epsilon schedule must satisfy 0 <= end <= start <= 1")
        if self.eps_decay_steps < 1 or self.pretrain_steps < 0:
            raise ValueError("step counts must be non-negative")


def reward_magnitudes(rewards: tuple[float, float, float]) -> tuple[float, float, float]:
    """Positive magnitudes (r1, r2, r3) from the signed reward vector,
    validating the required ordering r2 > r1 > r3 > 0."""
    r1, r2, r3 = rewards[0], -rewards[1], rewards[2]
    if not (r2 > r1 > r3 > 0.0):
        raise ValueError(
            f"invalid rewards: need blocked penalty > mmW reward > microwave "
            f"reward > 0, got magnitudes ({r1}, {r2}, {r3})"
        )
    return r1, r2, r3


def rho_threshold(rewards: tuple[float, float, float]) -> float:
    """LoS probability above which the mmW band beats the microwave band in
    long-run average reward: (r3 + r2) / (r1 + r2) on the magnitudes."""
    r1, r2, r3 = reward_magnitudes(rewards)
    return (r3 + r2) / (r1 + r2)


@dataclass
class QTable:
    """One UE's 3x2 table of state-decision values plus its learner state."""

    cfg: QlConfig = field(default_factory=QlConfig)
    q: np.ndarray = field(default_factory=lambda: np.zeros((3, 2)))
    visits: np.ndarray = field(default_factory=lambda: np.zeros((3, 2), dtype=np.int64))
    state: BandState = BandState.UW_SERVED
    steps: int = 0

    def __post_init__(self) -> None:
        self.cfg.validate()

    def learning_rate(self, state: BandState, decision: BandDecision) -> float:
        n = self.visits[state, decision]
        return self.cfg.alpha / (1.0 + n) ** self.cfg.alpha_power

    def epsilon(self) -> float:
        c = self.cfg
        if self.steps >= c.eps_decay_steps:
            return c.eps_end
        frac = self.steps / c.eps_decay_steps
        return c.eps_start + frac * (c.eps_end - c.eps_start)


def transition(state: BandState, decision: BandDecision, los_draw: int) -> BandState:
    """Next state of the band process.

    Switching away from either mmW state lands on the microwave band;
    staying on the microwave band stays there. Staying on mmW, or switching
    to it from the microwave band, lands on the unblocked state exactly when
    the slot's LoS draw succeeds.
    """
    if decision == BandDecision.SWITCH and state in (BandState.MMW_LOS, BandState.MMW_BLOCKED):
        return BandState.UW_SERVED
    if decision == BandDecision.STAY and state == BandState.UW_SERVED:
        return BandState.UW_SERVED
    return BandState.MMW_LOS if los_draw else BandState.MMW_BLOCKED


def q_update(table: QTable, state: BandState, decision: BandDecision,
             next_state: BandState) -> QTable:
    """One temporal-difference update toward the reward of the state arrived
    at plus the discounted value of the best decision there."""
    c = table.cfg
    a = table.learning_rate(state, decision)
    table.visits[state, decision] += 1
    target = c.rewards[next_state] + c.gamma * float(np.max(table.q[next_state]))
    table.q[state, decision] = (1.0 - a) * table.q[state, decision] + a * target
    return table


def classify(table: QTable) -> bool:
    """True when the learned values say mmW is worth preferring: staying is
    weakly better in both mmW states and switching is weakly better on the
    microwave band."""
    q = table.q
    return bool(
        q[BandState.MMW_LOS, BandDecision.STAY] >= q[BandState.MMW_LOS, BandDecision.SWITCH]
        and q[BandState.MMW_BLOCKED, BandDecision.STAY] >= q[BandState.MMW_BLOCKED, BandDecision.SWITCH]
        and q[BandState.UW_SERVED, BandDecision.SWITCH] >= q[BandState.UW_SERVED, BandDecision.STAY]
    )


def _pick_decision(table: QTable, rng: np.random.Generator) -> BandDecision:
    if table.cfg.exploration == "probe":
        toward_mmw = rng.random() < table.cfg.probe_bias
        if table.state == BandState.UW_SERVED:
            return BandDecision.SWITCH if toward_mmw else BandDecision.STAY
        return BandDecision.STAY if toward_mmw else BandDecision.SWITCH
    if rng.random() < table.epsilon():
        return BandDecision(int(rng.integers(0, 2)))
    return BandDecision(int(np.argmax(table.q[table.state])))


def learn_step(table: QTable, los_draw: int, rng: np.random.Generator) -> BandState:
    """One behavior-policy step: pick a decision, transition with the given
    LoS draw, update the table, and advance the learner's state."""
    decision = _pick_decision(table, rng)
    nxt = transition(table.state, decision, los_draw)
    q_update(table, table.state, decision, nxt)
    table.state = nxt
    table.steps += 1
    return nxt


def train(rho: float, steps: int, cfg: QlConfig, rng: np.random.Generator) -> QTable:
    """Run a fresh learner for the given number of steps against a link with
    LoS probability rho, drawing the blockage process from ``rng``."""
    table = QTable(cfg=cfg)
    for _ in range(steps):
        learn_step(table, int(rng.random() < rho), rng)
    return table
