"""Joint application selection and microwave RB allocation, run each slot as
a one-to-many matching game with externalities.

Applications are admitted one at a time, most-efficient first (smallest
required-load to total-rate ratio). After each admission a propose/accept
loop runs: every admitted application that is not yet satisfied proposes to
its best remaining RB, and each RB keeps only the highest-rate applicant among
the proposers and its current holder. An RB, once proposed to, is spent for
that proposer for the rest of the slot, which bounds the total work and makes
the final matching two-sided stable. If an admission round ends with someone
unsatisfied, the most recent admission is cancelled and its RBs released.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import RadioConfig
from .model import ContextInfo


class NoServableCandidate(RuntimeError):
    """Raised when no application in a selection pool has any usable rate."""


@dataclass
class MatchState:
    """Mutable state of the per-slot matching game.

    ``assignment`` maps RB index to the admitted application holding it.
    ``members`` lists admitted applications in admission order (the newest
    is last, which is the one cancelled first on infeasibility).
    ``available`` holds, per member, the RBs it has not proposed to yet.
    ``iterations`` counts individual proposals.
    """

    assignment: dict[int, int] = field(default_factory=dict)
    members: list[int] = field(default_factory=list)
    available: dict[int, set[int]] = field(default_factory=dict)
    iterations: int = 0

    def rbs_of(self, app_id: int) -> list[int]:
        return sorted(k for k, a in self.assignment.items() if a == app_id)


def priority_groups_uw(ctx: ContextInfo, slot: int) -> tuple[set[int], set[int]]:
    """Split the live applications into the due-now group (deadline equals the
    current slot) and the deferrable group (deadline strictly later)."""
    due: set[int] = set()
    later: set[int] = set()
    for j, ids in ctx.alive_classes.items():
        for a in ids:
            if ctx.required_loads[a] <= 0.0:
                continue
            if j == slot:
                due.add(a)
            elif j > slot:
                later.add(a)
    return due, later


def next_candidate(group: set[int], required: dict[str, float] | dict[int, float],
                   rates: dict[int, np.ndarray]) -> int:
    """The application minimizing required load over total achievable rate.

    Ties break toward the lowest application id. Raises NoServableCandidate
    when the group is empty or no member has a positive total rate.
    """
    best = None
    best_key = None
    for a in group:
        total = float(np.sum(rates[a]))
        if total <= 0.0:
            continue
        key = (required[a] / total, a)
        if best_key is None or key < best_key:
            best, best_key = a, key
    if best is None:
        raise NoServableCandidate("no servable candidate: all rates are zero")
    return best


def assigned_rate(app_id: int, assignment: dict[int, int],
                  rates: dict[int, np.ndarray]) -> float:
    """Sum of the application's rates over the RBs it currently holds."""
    return float(sum(rates[app_id][k] for k, a in assignment.items() if a == app_id))


def is_rate_satisfied(app_id: int, assignment: dict[int, int],
                      rates: dict[int, np.ndarray], required: dict[int, float],
                      tau: float) -> bool:
    """Whether the held RBs deliver the full outstanding load within the slot."""
    return tau * assigned_rate(app_id, assignment, rates) >= required[app_id]


def ua_utility(app_id: int, rb: int, assignment: dict[int, int],
               rates: dict[int, np.ndarray], required: dict[int, float],
               tau: float) -> float:
    """Value of an RB to an application: zero once its held RBs already cover
    its outstanding load, the achievable rate on that RB otherwise."""
    if is_rate_satisfied(app_id, assignment, rates, required, tau):
        return 0.0
    return float(rates[app_id][rb])


def rb_utility(app_id: int, rb: int, rates: dict[int, np.ndarray]) -> float:
    """Value of an application to an RB: simply the achievable rate."""
    return float(rates[app_id][rb])


def _proposal_rounds(state: MatchState, rates: dict[int, np.ndarray],
                     required: dict[int, float], tau: float,
                     held_rate: dict[int, float]) -> None:
    """Run propose/accept rounds until every member is satisfied or out of RBs.

    ``held_rate`` carries each member's summed rate over held RBs and is kept
    in step with the assignment to avoid rescanning it on every check.
    """
    while True:
        proposals: dict[int, list[int]] = {}
        for a in state.members:
            if not state.available[a]:
                continue
            if tau * held_rate[a] >= required[a]:
                continue
            row = rates[a]
            k_best = max(state.available[a], key=lambda k: (row[k], -k))
            proposals.setdefault(k_best, []).append(a)
        if not proposals:
            return
        state.iterations += sum(len(v) for v in proposals.values())
        for k, applicants in proposals.items():
            contenders = list(applicants)
            holder = state.assignment.get(k)
            if holder is not None:
                contenders.append(holder)
            winner = max(contenders, key=lambda a: (rates[a][k], -a))
            for a in applicants:
                state.available[a].discard(k)
            if winner != holder:
                if holder is not None:
                    held_rate[holder] -= float(rates[holder][k])
                held_rate[winner] += float(rates[winner][k])
                state.assignment[k] = winner


def _release(state: MatchState, app_id: int, held_rate: dict[int, float]) -> None:
    for k in [k for k, a in state.assignment.items() if a == app_id]:
        del state.assignment[k]
    held_rate.pop(app_id, None)


def schedule_uw(ctx: ContextInfo, rates: dict[int, np.ndarray],
                cfg: RadioConfig) -> MatchState:
    """Admit applications and allocate microwave RBs for one slot.

    The due-now group is processed exhaustively; the deferrable group is then
    drawn from only while unassigned RBs remain. Every application kept in the
    final selection is guaranteed its full outstanding load within the slot;
    admissions that cannot be made feasible are cancelled, newest first, with
    their RBs released (proposals already made stay spent).
    """
    due, later = priority_groups_uw(ctx, ctx.slot)
    state = MatchState()
    required = ctx.required_loads
    all_rbs = range(cfg.k1)
    totals = {a: float(np.sum(rates[a])) for a in due | later}
    held_rate: dict[int, float] = {}

    def all_satisfied() -> bool:
        # Fresh sums here guard against drift in the incremental tracker.
        return all(
            is_rate_satisfied(a, state.assignment, rates, required, cfg.tau)
            for a in state.members
        )

    def admit_from(pool: set[int], need_free_rb: bool) -> None:
        pool = {a for a in pool if totals[a] > 0.0}
        while pool:
            if need_free_rb and len(state.assignment) >= cfg.k1:
                return
            a_star = next_candidate(pool, required, rates)
            pool.remove(a_star)
            state.members.append(a_star)
            state.available[a_star] = set(all_rbs)
            held_rate[a_star] = 0.0
            _proposal_rounds(state, rates, required, cfg.tau, held_rate)
            while not all_satisfied():
                cancelled = state.members.pop()
                _release(state, cancelled, held_rate)
                _proposal_rounds(state, rates, required, cfg.tau, held_rate)

    admit_from(due, need_free_rb=False)
    if len(state.assignment) < cfg.k1:
        admit_from(later, need_free_rb=True)
    return state


def find_blocking_pairs(assignment: dict[int, int], members: list[int],
                        rates: dict[int, np.ndarray], required: dict[int, float],
                        tau: float, k1: int) -> list[tuple[int, int]]:
    """All (application, RB) pairs that would both strictly gain by matching.

    An application blocks with an RB it does not hold when it is still short
    of its load (so an extra RB has positive value to it) and the RB is either
    free or carries a lower rate with its current holder.
    """
    pairs = []
    for a in members:
        if is_rate_satisfied(a, assignment, rates, required, tau):
            continue
        for k in range(k1):
            if assignment.get(k) == a:
                continue
            r = float(rates[a][k])
            if r <= 0.0:
                continue
            holder = assignment.get(k)
            if holder is None or r > float(rates[holder][k]):
                pairs.append((a, k))
    return pairs


def is_stable(assignment: dict[int, int], members: list[int],
              rates: dict[int, np.ndarray], required: dict[int, float],
              tau: float, k1: int) -> bool:
    """True when the matching admits no blocking pair."""
    return not find_blocking_pairs(assignment, members, rates, required, tau, k1)
