from .config import AttackerConfig, ConfigError, SimConfig, SimResult
from .simulation import (
    ATTACKER,
    Ledger,
    SweepError,
    honest_reward_baseline,
    run_simulation,
    sweep,
)
from .strategy import HONEST, MiningStrategy

__all__ = [
    "ATTACKER",
    "AttackerConfig",
    "ConfigError",
    "HONEST",
    "Ledger",
    "MiningStrategy",
    "SimConfig",
    "SimResult",
    "SweepError",
    "honest_reward_baseline",
    "run_simulation",
    "sweep",
]
