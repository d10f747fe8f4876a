"""Path loss, small-scale fading, and achievable-rate computation for the
microwave (OFDMA, Rayleigh) and millimeter-wave (TDMA, Rician, blockage-prone)
bands."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import UserEquipment


@dataclass
class RadioConfig:
    """Radio-level parameters for both bands.

    Defaults follow the standard small-cell setup this simulator targets:
    30 dBm per band, 10 MHz of microwave spectrum in 180 kHz RBs, 1 GHz of
    mmW spectrum split over ``k2`` RBs, log-distance path loss with
    (exponent, 1 m intercept, shadowing std) of (3, 38 dB, 10 dB) at
    microwave and (2, 70 dB, 5.2 dB) at mmW, an 18 dBi mmW beamforming
    gain, 10 ms slots, and a 0.1 ms beam-training charge per mmW user.
    """

    p1_dbm: float = 30.0
    p2_dbm: float = 30.0
    k1: int = 50
    k2: int = 512
    w1: float = 180e3
    w2: float = 1e9 / 512
    n0_dbm_hz: float = -174.0
    psi_dbi: float = 18.0
    alpha1: float = 3.0
    beta1: float = 38.0
    xi1: float = 10.0
    alpha2: float = 2.0
    beta2: float = 70.0
    xi2: float = 5.2
    rician_k: float = 2.4
    tau: float = 10e-3
    tau_prime: float = 0.1e-3

    def validate(self) -> None:
        if self.k1 < 1 or self.k2 < 1:
            raise ValueError("RB counts must be at least 1")
        for name in ("w1", "w2", "tau"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tau_prime < 0:
            raise ValueError("tau_prime must be non-negative")
        if self.tau_prime >= self.tau:
            raise ValueError("beam-training overhead must be smaller than the slot")
        if self.rician_k <= 0:
            raise ValueError("Rician K-factor must be positive")


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def pathloss_uw(position: tuple[float, float], shadow_db: float, cfg: RadioConfig) -> float:
    """Log-distance microwave path loss in dB: 1 m intercept plus
    10*exponent*log10(d) plus the shadowing realization."""
    d = math.hypot(position[0], position[1])
    if d == 0.0:
        raise ValueError("singular distance: UE co-located with the base station")
    return cfg.beta1 + 10.0 * cfg.alpha1 * math.log10(d) + shadow_db


def pathloss_mmw(position: tuple[float, float], chi_db: float, cfg: RadioConfig) -> float:
    """Log-distance mmW path loss in dB with the fitted-deviation term chi."""
    d = math.hypot(position[0], position[1])
    if d == 0.0:
        raise ValueError("singular distance: UE co-located with the base station")
    return cfg.beta2 + 10.0 * cfg.alpha2 * math.log10(d) + chi_db


@dataclass
class UwChannelState:
    """Per-slot microwave fading: squared Rayleigh magnitudes with unit mean
    power, one per (UE, RB)."""

    gains: dict[int, np.ndarray] = field(default_factory=dict)


@dataclass
class MmwChannelState:
    """Per-slot mmW fading and blockage: squared Rician magnitudes with unit
    mean power per (UE, RB), and one Bernoulli LoS draw per UE shared by all
    of its applications."""

    gains: dict[int, np.ndarray] = field(default_factory=dict)
    los: dict[int, int] = field(default_factory=dict)


def draw_rayleigh_power(rng: np.random.Generator, size) -> np.ndarray:
    """|g|^2 for Rayleigh fading with E[|g|^2] = 1 (unit-mean exponential)."""
    return rng.exponential(1.0, size=size)


def draw_rician_power(rng: np.random.Generator, k_factor: float, size) -> np.ndarray:
    """|h|^2 for Rician fading with the given K-factor and E[|h|^2] = 1."""
    los_amp = math.sqrt(k_factor / (k_factor + 1.0))
    sigma = math.sqrt(1.0 / (2.0 * (k_factor + 1.0)))
    re = los_amp + sigma * rng.standard_normal(size)
    im = sigma * rng.standard_normal(size)
    return re * re + im * im


def draw_uw_state(ues: list[UserEquipment], cfg: RadioConfig,
                  rng: np.random.Generator) -> UwChannelState:
    return UwChannelState(
        gains={ue.id: draw_rayleigh_power(rng, cfg.k1) for ue in ues}
    )


def draw_mmw_state(ues: list[UserEquipment], cfg: RadioConfig,
                   fading_rng: np.random.Generator,
                   blockage_rng: np.random.Generator) -> MmwChannelState:
    gains = {ue.id: draw_rician_power(fading_rng, cfg.rician_k, cfg.k2) for ue in ues}
    los = {ue.id: int(blockage_rng.random() < ue.rho) for ue in ues}
    return MmwChannelState(gains=gains, los=los)


def rate_uw(ue: UserEquipment, rb: int, state: UwChannelState, cfg: RadioConfig) -> float:
    """Achievable microwave rate in bits/s for one RB, with the band's total
    power spread uniformly over all RBs."""
    if not 0 <= rb < cfg.k1:
        raise IndexError(f"RB index {rb} out of range 0..{cfg.k1 - 1}")
    loss_db = pathloss_uw(ue.position, ue.shadow_uw_db, cfg)
    p_rb = dbm_to_watts(cfg.p1_dbm) / cfg.k1
    noise = dbm_to_watts(cfg.n0_dbm_hz) * cfg.w1
    snr = p_rb * state.gains[ue.id][rb] * db_to_linear(-loss_db) / noise
    return cfg.w1 * math.log2(1.0 + snr)


def rate_mmw_los(ue: UserEquipment, state: MmwChannelState, cfg: RadioConfig) -> float:
    """mmW rate in bits/s conditioned on an unblocked link: sum over all mmW
    RBs of the per-RB spectral efficiency including the beamforming gain.

    This is the planning rate the schedulers size time allocations with; the
    blockage draw then decides whether transmission actually succeeds.
    """
    loss_db = pathloss_mmw(ue.position, ue.shadow_mmw_db, cfg)
    p_rb = dbm_to_watts(cfg.p2_dbm) / cfg.k2
    noise = dbm_to_watts(cfg.n0_dbm_hz) * cfg.w2
    snr = p_rb * db_to_linear(cfg.psi_dbi) * state.gains[ue.id] * db_to_linear(-loss_db) / noise
    return float(cfg.w2 * np.sum(np.log2(1.0 + snr)))


def rate_mmw(ue: UserEquipment, state: MmwChannelState, cfg: RadioConfig) -> float:
    """Total achievable mmW rate in bits/s: the LoS-conditioned rate when this
    slot's blockage draw leaves the link unblocked, exactly zero otherwise."""
    if not state.los.get(ue.id, 0):
        return 0.0
    return rate_mmw_los(ue, state, cfg)


def uw_rate_rows(ues: list[UserEquipment], state: UwChannelState,
                 cfg: RadioConfig) -> dict[int, np.ndarray]:
    """Per-UE vector of microwave rates over all RBs (vectorized rate_uw)."""
    p_rb = dbm_to_watts(cfg.p1_dbm) / cfg.k1
    noise = dbm_to_watts(cfg.n0_dbm_hz) * cfg.w1
    rows = {}
    for ue in ues:
        loss = pathloss_uw(ue.position, ue.shadow_uw_db, cfg)
        snr = p_rb * state.gains[ue.id] * db_to_linear(-loss) / noise
        rows[ue.id] = cfg.w1 * np.log2(1.0 + snr)
    return rows


def mmw_los_rate_by_ue(ues: list[UserEquipment], state: MmwChannelState,
                       cfg: RadioConfig) -> dict[int, float]:
    return {ue.id: rate_mmw_los(ue, state, cfg) for ue in ues}
