from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

from ..units import DRIP_PER_CFX

DELAY_MODELS = ("exponential", "constant")


class ConfigError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


@dataclass(frozen=True)
class AttackerConfig:
    power: float
    withhold_s: float = 0.0
    instant_network: bool = True

    def validate(self, prefix: str = "attacker") -> list[str]:
        out = []
        if not 0 <= self.power < 1:
            out.append(f"{prefix}.power out of [0,1)")
        if math.isnan(self.withhold_s) or self.withhold_s < 0:
            out.append(f"{prefix}.withhold_s must be >= 0")
        return out


@dataclass(frozen=True)
class SimConfig:
    """One network scenario. Node 0 is the attacker when one is configured."""

    num_nodes: int = 200
    block_rate: float = 2.0
    mean_delay_s: float = 4.1
    delay_model: str = "exponential"
    total_blocks: int = 2000
    warmup_blocks: int = 1000
    seed: int = 0
    attacker: Optional[AttackerConfig] = None
    base_reward: int = DRIP_PER_CFX
    horizon_epochs: int = 10
    max_tail_blocks: Optional[int] = None  # None -> total_blocks

    def validate(self, prefix: str = "") -> list[str]:
        p = prefix + "." if prefix else ""
        out = []
        if self.num_nodes < 1:
            out.append(f"{p}num_nodes must be >= 1")
        if not self.block_rate > 0:
            out.append(f"{p}block_rate must be > 0")
        if not self.mean_delay_s >= 0:
            out.append(f"{p}mean_delay_s must be >= 0")
        if self.delay_model not in DELAY_MODELS:
            out.append(f"{p}delay_model must be one of {', '.join(DELAY_MODELS)}")
        if self.warmup_blocks < 0:
            out.append(f"{p}warmup_blocks must be >= 0")
        if not self.total_blocks > self.warmup_blocks:
            out.append(f"{p}total_blocks must exceed warmup_blocks")
        if self.base_reward < 0:
            out.append(f"{p}base_reward must be >= 0")
        if self.horizon_epochs < 0:
            out.append(f"{p}horizon_epochs must be >= 0")
        if self.max_tail_blocks is not None and self.max_tail_blocks < 0:
            out.append(f"{p}max_tail_blocks must be >= 0")
        if self.attacker is not None:
            out.extend(self.attacker.validate(f"{p}attacker"))
            if self.num_nodes < 2:
                out.append(f"{p}num_nodes must be >= 2 with an attacker")
        return out

    def check(self) -> "SimConfig":
        problems = self.validate()
        if problems:
            raise ConfigError(problems)
        return self

    @property
    def tail_limit(self) -> int:
        return self.total_blocks if self.max_tail_blocks is None else self.max_tail_blocks

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        data = dict(data)
        att = data.pop("attacker", None)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError([f"unknown field {k}" for k in sorted(unknown)])
        if att is not None:
            extra = set(att) - set(AttackerConfig.__dataclass_fields__)
            if extra:
                raise ConfigError([f"attacker: unknown field {k}" for k in sorted(extra)])
            att = AttackerConfig(**att)
        return cls(attacker=att, **data)


@dataclass
class SimResult:
    config: SimConfig
    per_miner_reward: dict = field(default_factory=dict)  # miner -> Drip
    attacker_reward: Optional[int] = None
    baseline_reward: Optional[int] = None
    attacker_reward_ratio: Optional[float] = None
    blocks_measured: int = 0
    attacker_blocks: int = 0
    immature_blocks: int = 0
    graph: object = None  # TreeGraph of released blocks

    def csv_row(self) -> dict:
        att = self.config.attacker
        return {
            "power": att.power if att else 0.0,
            "withhold_s": att.withhold_s if att else 0.0,
            "seed": self.config.seed,
            "ratio": self.attacker_reward_ratio,
            "blocks_measured": self.blocks_measured,
        }
