from .bounds import (
    AttackParams,
    BoundResult,
    bound_table,
    bounds,
    conflux_bound,
    expected_attack_length,
    miner_equilibrium,
    pi_t,
    serial_bound,
)
from .withholding import WithholdingStrategy

__all__ = [
    "AttackParams",
    "BoundResult",
    "WithholdingStrategy",
    "bound_table",
    "bounds",
    "conflux_bound",
    "expected_attack_length",
    "miner_equilibrium",
    "pi_t",
    "serial_bound",
]
