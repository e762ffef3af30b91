from .graph import (
    DEFAULT_HORIZON,
    GENESIS_ID,
    Block,
    DanglingEdgeError,
    DuplicateBlockError,
    Epoch,
    InvalidBlockError,
    NotEpochedError,
    TreeGraph,
    TreeGraphError,
    UnknownBlockError,
    genesis,
)
from .rewards import (
    RewardParams,
    apply_transactions,
    block_reward,
    block_reward_drip,
    graph_rewards,
    penalty_ratio,
)

__all__ = [
    "DEFAULT_HORIZON",
    "GENESIS_ID",
    "Block",
    "DanglingEdgeError",
    "DuplicateBlockError",
    "Epoch",
    "InvalidBlockError",
    "NotEpochedError",
    "TreeGraph",
    "TreeGraphError",
    "UnknownBlockError",
    "genesis",
    "RewardParams",
    "apply_transactions",
    "block_reward",
    "block_reward_drip",
    "graph_rewards",
    "penalty_ratio",
]
