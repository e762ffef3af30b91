"""Mining strategies: how a node chooses a parent and when it broadcasts."""

from __future__ import annotations


class MiningStrategy:
    """Honest mining: extend the local pivot tip, broadcast immediately."""

    name = "honest"

    def choose_parent(self, ledger, node: int, now: float, view) -> int:
        return ledger.local_pivot_tip(view)

    def release_time(self, now: float) -> float:
        return now

    def on_created(self, block_id: int, now: float) -> None:
        pass


HONEST = MiningStrategy()
