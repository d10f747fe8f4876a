"""Reference schedulers: proportional fair with a minimum-rate term, and
round robin. Both are deliberately blind to per-UE LoS probabilities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import RadioConfig
from .mmw_knapsack import fits_time_budget
from .model import ContextInfo, SlotDecision


@dataclass
class PfState:
    """Exponentially smoothed per-app delivered rate, the denominator memory
    of the proportional-fair metric. Initialized to a small positive floor to
    keep the metric finite before any delivery."""

    avg_rate: dict[int, float] = field(default_factory=dict)
    window: float = 5.0
    floor: float = 1.0

    def rate_of(self, app_id: int) -> float:
        return self.avg_rate.get(app_id, self.floor)

    def update(self, delivered_bits: dict[int, float], known_ids: set[int], tau: float) -> None:
        """Smooth in this slot's delivered rate for every known app; apps that
        received nothing decay toward zero."""
        w = 1.0 / self.window
        for a in known_ids:
            inst = delivered_bits.get(a, 0.0) / tau
            self.avg_rate[a] = (1.0 - w) * self.rate_of(a) + w * inst


def _due_pool(ctx: ContextInfo, slot: int) -> list[int]:
    """Apps of the due-now class with outstanding bits, id order."""
    ids = ctx.alive_classes.get(slot, set())
    return sorted(a for a in ids if ctx.required_loads[a] > 0.0)


def _alive_pool(ctx: ContextInfo) -> list[int]:
    return sorted(a for a in ctx.alive_ids() if ctx.required_loads[a] > 0.0)


def schedule_pf_mrr(ctx: ContextInfo, uw_rates: dict[int, np.ndarray],
                    mmw_rates: dict[int, float], pf_state: PfState,
                    cfg: RadioConfig, band: str = "dual") -> SlotDecision:
    """Proportional fair with a minimum-rate requirement.

    Each microwave RB goes to the due-class app maximizing achievable rate
    over (smoothed delivered rate + rate still required to finish in time).
    Apps not taken by the microwave stage are granted mmW time in descending
    order of the same metric evaluated with the mmW rate, each sized to finish
    its load, while the slot (net of beam-training charges) has room.
    """
    decision = SlotDecision()
    due = _due_pool(ctx, slot=ctx.slot)
    if band != "mmw" and due:
        req_rate = np.array([ctx.required_loads[a] / cfg.tau for a in due])
        denom = np.array([pf_state.rate_of(a) for a in due]) + req_rate
        rate_matrix = np.stack([uw_rates[a] for a in due])
        metric = rate_matrix / denom[:, None]
        winners = np.argmax(metric, axis=0)
        for k in range(cfg.k1):
            a = due[int(winners[k])]
            decision.x[(a, k)] = 1
            decision.g1.add(a)

    if band != "uw":
        pool = [a for a in _alive_pool(ctx) if a not in decision.g1]

        def metric_of(a: int) -> float:
            denom = pf_state.rate_of(a) + ctx.required_loads[a] / cfg.tau
            return mmw_rates.get(a, 0.0) / denom

        total = 0.0
        for a in sorted(pool, key=lambda a: (-metric_of(a), a)):
            rate = mmw_rates.get(a, 0.0)
            if rate <= 0.0:
                continue
            t_a = ctx.required_loads[a] / rate
            if not fits_time_budget(total + t_a, len(decision.g2) + 1, cfg):
                break
            decision.tau[a] = t_a
            decision.g2.add(a)
            total += t_a
    return decision


def schedule_rr(ctx: ContextInfo, uw_rates: dict[int, np.ndarray],
                mmw_rates: dict[int, float], cfg: RadioConfig,
                band: str = "dual") -> SlotDecision:
    """Round robin: equal RB counts over the due-now class (leftover RBs to
    the lowest ids), and an equal time split of the mmW slot over every other
    app still alive."""
    decision = SlotDecision()
    due = _due_pool(ctx, slot=ctx.slot)
    if band != "mmw" and due:
        base, extra = divmod(cfg.k1, len(due))
        rb = 0
        for i, a in enumerate(due):
            count = base + (1 if i < extra else 0)
            for _ in range(count):
                decision.x[(a, rb)] = 1
                rb += 1
            if count:
                decision.g1.add(a)

    if band != "uw":
        pool = [a for a in _alive_pool(ctx)
                if a not in decision.g1 and mmw_rates.get(a, 0.0) > 0.0]
        # Equal shares must stay positive after the per-app training charge.
        n = len(pool)
        while n > 0 and n * cfg.tau_prime >= cfg.tau:
            n -= 1
        pool = pool[:n]
        if pool:
            share = (cfg.tau - len(pool) * cfg.tau_prime) / len(pool)
            for a in pool:
                decision.tau[a] = share
                decision.g2.add(a)
    return decision
