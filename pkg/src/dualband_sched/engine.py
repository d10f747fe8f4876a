"""Monte-Carlo drop orchestration: UE placement, traffic generation, the
per-slot scheduling loop over both bands, and sweep aggregation.

A drop is one independent realization: UEs placed uniformly in the annulus
around the base station, each running a fixed number of applications with
delay classes drawn uniformly, simulated for exactly as many slots as there
are delay classes. Every random concern (placement, shadowing, fading,
blockage, learning exploration) draws from its own seeded stream, so results
are bit-reproducible and toggling one feature leaves the others' draws alone.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, los_qlearning, mmw_knapsack, uw_matching
from .analytics import OutageStats, outage_probability
from .channel import (
    RadioConfig,
    draw_mmw_state,
    draw_uw_state,
    mmw_los_rate_by_ue,
    uw_rate_rows,
)
from .los_qlearning import QlConfig, QTable, classify, learn_step, rho_threshold
from .model import (
    ContextInfo,
    SlotDecision,
    UserApp,
    UserEquipment,
    build_context,
    check_decision,
    qos_indicator,
)

SCHEDULERS = ("context", "pfmrr", "rr")
BANDS = ("dual", "uw", "mmw")
RHO_POLICIES = ("all_one", "edge_random", "half_random")
LOS_MODES = ("oracle", "qlearn", "none")
SWEEPABLE = ("m_ues", "total_bits", "tau_prime", "band")


@dataclass
class Scenario:
    """Everything one experiment point needs: population, traffic, radio,
    scheduler choice, and learning configuration."""

    m_ues: int = 30
    uas_per_ue: int = 3
    qos_classes: int = 5
    total_bits: float | list[float] = 1e6
    rho_policy: str = "all_one"
    edge_distance_m: float = 66.0
    scheduler: str = "context"
    band: str = "dual"
    los_mode: str = "oracle"
    cell_radius_m: float = 100.0
    min_distance_m: float = 5.0
    drops: int = 100
    seed: int = 1
    radio: RadioConfig = field(default_factory=RadioConfig)
    qlearn: QlConfig = field(default_factory=QlConfig)

    def validate(self) -> None:
        if self.m_ues < 1 or self.uas_per_ue < 1 or self.qos_classes < 1:
            raise ValueError("m_ues, uas_per_ue and qos_classes must be at least 1")
        if self.drops < 1:
            raise ValueError("drops must be at least 1")
        if isinstance(self.total_bits, list):
            if len(self.total_bits) != self.qos_classes:
                raise ValueError("per-class total_bits must list one value per class")
            if any(b < 0 for b in self.total_bits):
                raise ValueError("total_bits must be non-negative")
        elif self.total_bits < 0:
            raise ValueError("total_bits must be non-negative")
        if self.rho_policy not in RHO_POLICIES:
            raise ValueError(f"unknown rho_policy {self.rho_policy!r}")
        if self.scheduler not in SCHEDULERS:
            raise ValueError(f"unknown scheduler {self.scheduler!r}")
        if self.band not in BANDS:
            raise ValueError(f"unknown band {self.band!r}")
        if self.los_mode not in LOS_MODES:
            raise ValueError(f"unknown los_mode {self.los_mode!r}")
        if not 0 < self.min_distance_m < self.cell_radius_m:
            raise ValueError("need 0 < min_distance_m < cell_radius_m")
        if not self.min_distance_m <= self.edge_distance_m <= self.cell_radius_m:
            raise ValueError("edge_distance_m must lie within the cell")
        self.radio.validate()
        self.qlearn.validate()

    def bits_for_class(self, j: int) -> float:
        if isinstance(self.total_bits, list):
            return float(self.total_bits[j - 1])
        return float(self.total_bits)


@dataclass
class DropStreams:
    """Independent per-concern random streams for one drop."""

    placement: np.random.Generator
    shadowing: np.random.Generator
    fading: np.random.Generator
    blockage: np.random.Generator
    qlearn: np.random.Generator


def make_streams(seed: int) -> DropStreams:
    children = np.random.SeedSequence(seed).spawn(5)
    return DropStreams(*(np.random.default_rng(s) for s in children))


def place_ues(sc: Scenario, streams: DropStreams) -> list[UserEquipment]:
    """UEs uniform over the annulus between the minimum distance and the cell
    radius, with per-drop shadowing realizations and the policy's LoS
    probability."""
    rng = streams.placement
    ues = []
    r2_min, r2_max = sc.min_distance_m**2, sc.cell_radius_m**2
    for m in range(sc.m_ues):
        r = math.sqrt(rng.uniform(r2_min, r2_max))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        ues.append(
            UserEquipment(
                id=m,
                position=(r * math.cos(theta), r * math.sin(theta)),
                shadow_uw_db=streams.shadowing.normal(0.0, sc.radio.xi1),
                shadow_mmw_db=streams.shadowing.normal(0.0, sc.radio.xi2),
            )
        )
    if sc.rho_policy == "all_one":
        for ue in ues:
            ue.rho = 1.0
    elif sc.rho_policy == "edge_random":
        for ue in ues:
            ue.rho = rng.uniform(0.0, 1.0) if ue.distance > sc.edge_distance_m else 1.0
    else:  # half_random
        random_half = set(rng.permutation(sc.m_ues)[: sc.m_ues // 2].tolist())
        for ue in ues:
            ue.rho = rng.uniform(0.0, 1.0) if ue.id in random_half else 1.0
    return ues


def make_apps(sc: Scenario, ues: list[UserEquipment], streams: DropStreams) -> list[UserApp]:
    """One batch of applications per UE with delay classes drawn uniformly."""
    apps = []
    for ue in ues:
        for _ in range(sc.uas_per_ue):
            j = int(streams.placement.integers(1, sc.qos_classes + 1))
            app = UserApp(
                id=len(apps), ue_id=ue.id, qos_class=j,
                total_bits=sc.bits_for_class(j),
            )
            ue.app_ids.append(app.id)
            apps.append(app)
        ue.validate(sc.min_distance_m, sc.cell_radius_m)
    return apps


@dataclass
class RunResult:
    """Everything recorded from one drop."""

    seed: int
    outage: float
    satisfied: list[bool]
    app_classes: list[int]
    app_ues: list[int]
    per_ue_satisfied: list[int]
    stats: OutageStats
    uw_bits: list[float]
    mmw_bits: list[float]
    uw_iterations: int
    mmw_iterations: int
    iteration_bound: int
    classifications: dict[int, bool] | None


def iteration_bound(apps: list[UserApp], k1: int) -> int:
    """Worst-case iteration budget for the two-stage scheduler over a drop:
    (RB count + 1) times the sum over classes of class index times size."""
    per_class: dict[int, int] = {}
    for app in apps:
        per_class[app.qos_class] = per_class.get(app.qos_class, 0) + 1
    return (k1 + 1) * sum(j * n for j, n in per_class.items())


def _classification(sc: Scenario, ues: list[UserEquipment],
                    tables: dict[int, QTable] | None) -> dict[int, bool]:
    """Per-UE verdict on whether its mmW link is worth prioritizing."""
    if sc.los_mode == "none":
        return {ue.id: True for ue in ues}
    if sc.los_mode == "oracle":
        threshold = rho_threshold(sc.qlearn.rewards)
        return {ue.id: ue.rho >= threshold for ue in ues}
    assert tables is not None
    return {ue.id: classify(tables[ue.id]) for ue in ues}


def _deliver_uw(apps_by_id: dict[int, UserApp], decision: SlotDecision,
                uw_rates: dict[int, np.ndarray], cfg: RadioConfig) -> float:
    total = 0.0
    for a in decision.g1:
        rate = sum(uw_rates[a][k] for (aa, k) in decision.x if aa == a)
        total += apps_by_id[a].credit(cfg.tau * rate)
    return total


def run_drop(sc: Scenario, seed: int) -> RunResult:
    """Simulate one drop and return its full record. Identical (scenario,
    seed) pairs give identical results."""
    sc.validate()
    streams = make_streams(seed)
    ues = place_ues(sc, streams)
    apps = make_apps(sc, ues, streams)
    apps_by_id = {app.id: app for app in apps}
    ue_of = {app.id: app.ue_id for app in apps}
    cfg = sc.radio

    tables: dict[int, QTable] | None = None
    if sc.los_mode == "qlearn":
        tables = {}
        for ue in ues:
            table = QTable(cfg=sc.qlearn)
            for _ in range(sc.qlearn.pretrain_steps):
                learn_step(table, int(streams.qlearn.random() < ue.rho), streams.qlearn)
            tables[ue.id] = table

    pf_state = baselines.PfState() if sc.scheduler == "pfmrr" else None
    stats = OutageStats()
    uw_bits, mmw_bits = [], []
    uw_iterations = 0
    mmw_iterations = 0

    for t in range(1, sc.qos_classes + 1):
        for app in apps:
            app.begin_slot()
        uw_state = draw_uw_state(ues, cfg, streams.fading)
        mmw_state = draw_mmw_state(ues, cfg, streams.fading, streams.blockage)
        ctx = build_context(apps, ues, t)
        alive = ctx.alive_ids()
        uw_rows = uw_rate_rows(ues, uw_state, cfg)
        mmw_by_ue = mmw_los_rate_by_ue(ues, mmw_state, cfg)
        uw_rates = {a: uw_rows[ue_of[a]] for a in alive}
        mmw_rates = {a: mmw_by_ue[ue_of[a]] for a in alive}
        due_ids = ctx.alive_classes.get(t, set())
        due_apps = [a for a in apps if a.qos_class == t]

        decision = SlotDecision()
        if sc.scheduler == "context":
            if sc.band != "mmw":
                match = uw_matching.schedule_uw(ctx, uw_rates, cfg)
                uw_iterations += match.iterations
                decision.g1 = set(match.members)
                for k, a in match.assignment.items():
                    decision.x[(a, k)] = 1
            delivered_uw = _deliver_uw(apps_by_id, decision, uw_rates, cfg)
            sat_uw = sum(1 for a in due_apps if a.is_satisfied)
            if sc.band != "uw":
                label = _classification(sc, ues, tables)
                ctx_rest = ctx.without(decision.g1)
                tiers = mmw_knapsack.priority_groups_mmw(
                    ctx_rest, t, {a: label[ue_of[a]] for a in ctx_rest.alive_ids()}
                )
                taus, selected, iters = mmw_knapsack.schedule_mmw(
                    tiers, ctx.required_loads, mmw_rates, cfg
                )
                mmw_iterations += iters
                decision.tau = taus
                decision.g2 = set(selected)
        else:
            if sc.scheduler == "pfmrr":
                decision = baselines.schedule_pf_mrr(
                    ctx, uw_rates, mmw_rates, pf_state, cfg, band=sc.band
                )
            else:
                decision = baselines.schedule_rr(ctx, uw_rates, mmw_rates, cfg, band=sc.band)
            delivered_uw = _deliver_uw(apps_by_id, decision, uw_rates, cfg)
            sat_uw = sum(1 for a in due_apps if a.is_satisfied)

        problems = check_decision(decision, cfg.k1, cfg.tau, cfg.tau_prime)
        if problems:
            raise AssertionError(f"slot {t}: infeasible decision: {problems}")

        delivered_mmw = mmw_knapsack.deliver_mmw(
            apps_by_id, decision.tau, mmw_rates, mmw_state.los
        )
        sat_mmw = sum(1 for a in due_apps if a.is_satisfied) - sat_uw

        if pf_state is not None:
            per_app = {a: 0.0 for a in alive}
            for a in decision.g1:
                per_app[a] = sum(
                    cfg.tau * uw_rates[a][k] for (aa, k) in decision.x if aa == a
                )
            for a, bits in delivered_mmw.items():
                per_app[a] = per_app.get(a, 0.0) + bits
            pf_state.update(per_app, alive, cfg.tau)

        if tables is not None:
            for ue in ues:
                learn_step(tables[ue.id], mmw_state.los[ue.id], streams.qlearn)

        stats.sat_uw.append(sat_uw)
        stats.sat_mmw.append(sat_mmw)
        stats.due_counts.append(len(due_apps))
        uw_bits.append(delivered_uw)
        mmw_bits.append(sum(delivered_mmw.values()))

    for app in apps:
        if sum(app.received_log) > app.total_bits + 1e-6:
            raise AssertionError(f"app {app.id} credited more than its demand")

    stats.p_out = outage_probability(apps)
    stats.validate()
    satisfied = [bool(qos_indicator(app)) for app in apps]
    per_ue = [sum(1 for a in ue.app_ids if satisfied[a]) for ue in ues]
    return RunResult(
        seed=seed,
        outage=stats.p_out,
        satisfied=satisfied,
        app_classes=[app.qos_class for app in apps],
        app_ues=[app.ue_id for app in apps],
        per_ue_satisfied=per_ue,
        stats=stats,
        uw_bits=uw_bits,
        mmw_bits=mmw_bits,
        uw_iterations=uw_iterations,
        mmw_iterations=mmw_iterations,
        iteration_bound=iteration_bound(apps, cfg.k1),
        classifications=_classification(sc, ues, tables) if sc.los_mode == "qlearn" else None,
    )


@dataclass
class SweepRow:
    """Aggregated results for one sweep point."""

    sweep_param: str
    sweep_value: object
    scheduler: str
    band: str
    m_ues: int
    drops: int
    mean_outage: float
    ci_low: float
    ci_high: float
    mean_satisfied: float
    satisfied_ue_hist: list[int]
    uw_load: list[float]
    mmw_load: list[float]
    outages: list[float]


def scenario_at(sc: Scenario, param: str, value) -> Scenario:
    if param not in SWEEPABLE:
        raise ValueError(f"cannot sweep over {param!r}; choose one of {SWEEPABLE}")
    if param == "tau_prime":
        return replace(sc, radio=replace(sc.radio, tau_prime=float(value)))
    return replace(sc, **{param: value})


def run_point(sc: Scenario, parallel: int = 1) -> list[RunResult]:
    """All drops of one scenario, deterministically ordered by drop index.

    Drop i uses seed (scenario seed + i), so sweep points share common random
    numbers, which stabilizes ordering comparisons across points.
    """
    seeds = [sc.seed + i for i in range(sc.drops)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(run_drop, [sc] * len(seeds), seeds, chunksize=4))
    return [run_drop(sc, s) for s in seeds]


def aggregate(results: list[RunResult], sc: Scenario, sweep_param: str,
              sweep_value) -> SweepRow:
    outages = [r.outage for r in results]
    mean = float(np.mean(outages))
    se = float(np.std(outages, ddof=1) / math.sqrt(len(outages))) if len(outages) > 1 else 0.0
    hist = [0] * (sc.uas_per_ue + 1)
    for r in results:
        for count in r.per_ue_satisfied:
            hist[count] += 1
    slots = sc.qos_classes
    uw_load = [float(np.mean([r.uw_bits[t] for r in results])) for t in range(slots)]
    mmw_load = [float(np.mean([r.mmw_bits[t] for r in results])) for t in range(slots)]
    return SweepRow(
        sweep_param=sweep_param,
        sweep_value=sweep_value,
        scheduler=sc.scheduler,
        band=sc.band,
        m_ues=sc.m_ues,
        drops=sc.drops,
        mean_outage=mean,
        ci_low=mean - 1.96 * se,
        ci_high=mean + 1.96 * se,
        mean_satisfied=float(np.mean([sum(r.satisfied) for r in results])),
        satisfied_ue_hist=hist,
        uw_load=uw_load,
        mmw_load=mmw_load,
        outages=outages,
    )


def run_experiment(sc: Scenario, sweep: dict | None = None,
                   parallel: int = 1) -> list[SweepRow]:
    """Run a scenario, optionally sweeping one parameter, and aggregate
    outage statistics per sweep point."""
    sc.validate()
    if sweep is None:
        return [aggregate(run_point(sc, parallel), sc, "none", "")]
    param, values = sweep["parameter"], sweep["values"]
    rows = []
    for v in values:
        point = scenario_at(sc, param, v)
        point.validate()
        rows.append(aggregate(run_point(point, parallel), point, param, v))
    return rows
