"""Discrete-time simulator and scheduling library for a dual-band
(microwave + millimeter-wave) small cell."""

from .analytics import lecam_bound, outage_probability, poisson_outage_cdf
from .channel import RadioConfig
from .engine import RunResult, Scenario, run_drop, run_experiment
from .los_qlearning import QlConfig, QTable, classify, rho_threshold
from .model import ContextInfo, SlotDecision, UserApp, UserEquipment, qos_indicator

__all__ = [
    "ContextInfo",
    "QTable",
    "QlConfig",
    "RadioConfig",
    "RunResult",
    "Scenario",
    "SlotDecision",
    "UserApp",
    "UserEquipment",
    "classify",
    "lecam_bound",
    "outage_probability",
    "poisson_outage_cdf",
    "qos_indicator",
    "rho_threshold",
    "run_drop",
    "run_experiment",
]
