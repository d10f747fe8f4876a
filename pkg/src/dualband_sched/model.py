"""Domain types shared by every scheduler: UEs, user applications, slot
decisions, and the per-slot context snapshot the schedulers consume."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


class DeadlineNotReached(RuntimeError):
    """The QoS verdict for an application is undefined before its deadline slot."""


@dataclass
class UserEquipment:
    """A device at a fixed position that owns one or more user applications.

    All applications of a UE share its radio state: position, the per-drop
    shadowing realizations for each band, and the per-slot LoS success
    probability ``rho`` of the mmW link.
    """

    id: int
    position: tuple[float, float]
    rho: float = 1.0
    shadow_uw_db: float = 0.0
    shadow_mmw_db: float = 0.0
    app_ids: list[int] = field(default_factory=list)

    @property
    def distance(self) -> float:
        return math.hypot(self.position[0], self.position[1])

    def validate(self, min_distance: float = 5.0, max_distance: float = 100.0) -> None:
        if not min_distance <= self.distance <= max_distance:
            raise ValueError(
                f"UE {self.id} at distance {self.distance:.2f} m outside "
                f"[{min_distance}, {max_distance}] m"
            )
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"UE {self.id} LoS probability {self.rho} outside [0, 1]")
        if not self.app_ids:
            raise ValueError(f"UE {self.id} owns no applications")


@dataclass
class UserApp:
    """One application with its own delay class and traffic demand.

    ``qos_class`` is the number of slots the application tolerates: all of its
    ``total_bits`` must arrive within slots 1..qos_class or it counts as an
    outage. ``received_log[t-1]`` holds the bits credited during slot t.
    """

    id: int
    ue_id: int
    qos_class: int
    total_bits: float
    remaining_bits: float | None = None
    received_log: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.remaining_bits is None:
            self.remaining_bits = float(self.total_bits)

    @property
    def deadline(self) -> int:
        return self.qos_class

    @property
    def is_satisfied(self) -> bool:
        return self.remaining_bits <= 0.0

    def begin_slot(self) -> None:
        """Open a new slot entry in the received log."""
        self.received_log.append(0.0)

    def credit(self, bits: float) -> float:
        """Credit delivered bits, clamped to the outstanding demand.

        Returns the amount actually credited; the clamp keeps the cumulative
        receipt from ever exceeding ``total_bits``.
        """
        if not self.received_log:
            raise RuntimeError("credit() before begin_slot()")
        credited = min(float(bits), self.remaining_bits)
        credited = max(credited, 0.0)
        self.remaining_bits -= credited
        self.received_log[-1] += credited
        return credited


def qos_indicator(app: UserApp) -> int:
    """1 if the application received its full demand within its deadline, else 0.

    Raises DeadlineNotReached when queried before the deadline slot has been
    simulated. A zero-demand application is satisfied unconditionally.
    """
    if app.total_bits <= 0.0:
        return 1
    if len(app.received_log) < app.qos_class:
        raise DeadlineNotReached(
            f"app {app.id}: deadline not reached "
            f"(slot {len(app.received_log)} of {app.qos_class})"
        )
    received = sum(app.received_log[: app.qos_class])
    return 1 if received >= app.total_bits else 0


@dataclass
class SlotDecision:
    """The joint allocation for one slot.

    ``x`` is the sparse binary RB map holding only the 1-entries, keyed by
    (app id, RB index). ``tau`` maps app id to its mmW transmission time in
    seconds. ``g1``/``g2`` are the app ids scheduled on the microwave and
    mmW band respectively.
    """

    x: dict[tuple[int, int], int] = field(default_factory=dict)
    tau: dict[int, float] = field(default_factory=dict)
    g1: set[int] = field(default_factory=set)
    g2: set[int] = field(default_factory=set)

    def rbs_of(self, app_id: int) -> list[int]:
        return sorted(k for (a, k), v in self.x.items() if a == app_id and v)

    def rb_owner(self, rb: int) -> int | None:
        for (a, k), v in self.x.items():
            if k == rb and v:
                return a
        return None


# Slack absorbing float round-off when a time budget is saturated exactly.
TIME_EPS = 1e-12


def check_decision(decision: SlotDecision, k1: int, tau: float, tau_prime: float) -> list[str]:
    """Scan a SlotDecision against the per-slot feasibility constraints.

    Returns a list of human-readable violations (empty when feasible):
    every RB carries at most one app, the mmW time budget including the
    per-app beam-training charge fits in the slot, and no app appears on
    both bands.
    """
    violations = []
    seen_rb: dict[int, int] = {}
    for (a, k), v in decision.x.items():
        if not v:
            continue
        if not 0 <= k < k1:
            violations.append(f"RB index {k} out of range 0..{k1 - 1}")
        if k in seen_rb and seen_rb[k] != a:
            violations.append(f"RB {k} assigned to both app {seen_rb[k]} and app {a}")
        seen_rb[k] = a
        if a not in decision.g1:
            violations.append(f"app {a} holds RB {k} but is not in g1")
    budget = sum(decision.tau.values()) + len(decision.g2) * tau_prime
    if budget > tau + TIME_EPS:
        violations.append(f"mmW time budget exceeded: {budget:.6e} > {tau:.6e}")
    overlap = decision.g1 & decision.g2
    if overlap:
        violations.append(f"apps on both bands: {sorted(overlap)}")
    for a, t_a in decision.tau.items():
        if t_a < 0:
            violations.append(f"negative mmW time for app {a}")
        if t_a > 0 and a not in decision.g2:
            violations.append(f"app {a} has mmW time but is not in g2")
    return violations


@dataclass
class ContextInfo:
    """Snapshot the schedulers act on at the start of a slot: which delay
    classes are still alive, how many bits each live application still needs,
    and the LoS probability of its UE."""

    slot: int
    alive_classes: dict[int, set[int]]
    required_loads: dict[int, float]
    los_probs: dict[int, float]

    def alive_ids(self) -> set[int]:
        out: set[int] = set()
        for ids in self.alive_classes.values():
            out |= ids
        return out

    def deadline_of(self, app_id: int) -> int:
        for j, ids in self.alive_classes.items():
            if app_id in ids:
                return j
        raise KeyError(app_id)

    def without(self, app_ids: set[int]) -> ContextInfo:
        """Copy of this context with the given applications removed."""
        return ContextInfo(
            slot=self.slot,
            alive_classes={
                j: ids - app_ids for j, ids in self.alive_classes.items()
            },
            required_loads={
                a: b for a, b in self.required_loads.items() if a not in app_ids
            },
            los_probs={a: p for a, p in self.los_probs.items() if a not in app_ids},
        )

    def validate(self) -> None:
        alive = self.alive_ids()
        if set(self.required_loads) != alive:
            raise ValueError("required_loads keys do not match alive applications")
        for j in self.alive_classes:
            if j < self.slot:
                raise ValueError(f"class {j} is past its deadline at slot {self.slot}")


def build_context(apps: list[UserApp], ues: list[UserEquipment], slot: int) -> ContextInfo:
    """Collect exactly the applications whose deadline has not passed and that
    still have outstanding bits, together with their loads and LoS info."""
    ue_by_id = {ue.id: ue for ue in ues}
    alive_classes: dict[int, set[int]] = {}
    required: dict[int, float] = {}
    los: dict[int, float] = {}
    for app in apps:
        if app.qos_class < slot or app.remaining_bits <= 0.0:
            continue
        alive_classes.setdefault(app.qos_class, set()).add(app.id)
        required[app.id] = app.remaining_bits
        los[app.id] = ue_by_id[app.ue_id].rho
    return ContextInfo(
        slot=slot, alive_classes=alive_classes, required_loads=required, los_probs=los
    )
