"""Priority-tiered application selection and mmW time allocation.

Applications left unserved by the microwave stage are ranked into four tiers:
due this slot with a reliable (classified line-of-sight) link, due this slot
without one, deferrable with a reliable link, deferrable without. Within a
tier the scheduler repeatedly takes the application needing the least air
time and grants it exactly that time; selection stops altogether once the
next pick, together with its beam-training charge, would no longer fit in
the slot. With equal per-item benefit this greedy fill is an exact solution
of the underlying 0-1 knapsack.
"""
from __future__ import annotations

from dataclasses import dataclass

from .channel import RadioConfig
from .model import TIME_EPS, ContextInfo, UserApp


@dataclass
class MmwCandidate:
    """One application competing for mmW time in a slot."""

    ua_id: int
    required_time: float
    priority_tier: int
    classified_los: bool


def fits_time_budget(total_time: float, count: int, cfg: RadioConfig) -> bool:
    """Whether ``count`` transmissions totalling ``total_time`` seconds of data
    plus their beam-training charges fit in one slot."""
    return total_time + count * cfg.tau_prime <= cfg.tau + TIME_EPS


def priority_groups_mmw(ctx: ContextInfo, slot: int,
                        classification: dict[int, bool],
                        ) -> tuple[set[int], set[int], set[int], set[int]]:
    """Four disjoint priority tiers over the remaining live applications.

    The context must already exclude applications taken by the microwave
    stage. Classification says, per application, whether its UE's link is
    believed reliable enough to prefer the mmW band.
    """
    tiers: tuple[set[int], ...] = (set(), set(), set(), set())
    for j, ids in ctx.alive_classes.items():
        for a in ids:
            if ctx.required_loads[a] <= 0.0:
                continue
            reliable = bool(classification.get(a, False))
            if j == slot:
                tiers[0 if reliable else 1].add(a)
            else:
                tiers[2 if reliable else 3].add(a)
    return tiers


def schedule_mmw(tiers: tuple[set[int], ...], required: dict[int, float],
                 rates: dict[int, float], cfg: RadioConfig,
                 ) -> tuple[dict[int, float], list[int], int]:
    """Greedy equal-benefit knapsack fill over the tiers in priority order.

    ``rates`` are the LoS-conditioned planning rates. Returns the per-app
    time map, the selection in pick order, and the number of selection
    iterations (the rejected final pick included).
    """
    taus: dict[int, float] = {}
    selected: list[int] = []
    total_time = 0.0
    iterations = 0
    for tier in tiers:
        pool = sorted(
            (a for a in tier if required.get(a, 0.0) > 0.0 and rates.get(a, 0.0) > 0.0),
            key=lambda a: (required[a] / rates[a], a),
        )
        stopped = False
        for a in pool:
            iterations += 1
            t_a = required[a] / rates[a]
            if not fits_time_budget(total_time + t_a, len(selected) + 1, cfg):
                stopped = True
                break
            taus[a] = t_a
            selected.append(a)
            total_time += t_a
        if stopped:
            break
    return taus, selected, iterations


def deliver_mmw(apps_by_id: dict[int, UserApp], taus: dict[int, float],
                rates: dict[int, float], los: dict[int, int]) -> dict[int, float]:
    """Apply one slot of mmW transmissions.

    An application receives rate times allocated time if its UE's blockage
    draw came up line-of-sight this slot, and exactly zero bits otherwise;
    the allocated time is consumed either way. Credited bits are clamped to
    the outstanding demand.
    """
    delivered: dict[int, float] = {}
    for a, t_a in taus.items():
        app = apps_by_id[a]
        if los.get(app.ue_id, 0):
            delivered[a] = app.credit(rates[a] * t_a)
        else:
            delivered[a] = 0.0
    return delivered
