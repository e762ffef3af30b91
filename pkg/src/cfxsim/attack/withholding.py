"""Block-withholding strategy plugged into the network simulator."""

from __future__ import annotations

import math

from ..netsim.strategy import MiningStrategy


class WithholdingStrategy(MiningStrategy):
    """Keep mined blocks private for ``withhold_s`` seconds.

    While any own block is still withheld the attacker extends its own
    latest block; otherwise it mines like an honest node. References always
    cover every tip in its view. With ``withhold_s == 0`` nothing is ever
    withheld, so the behaviour is exactly honest.
    """

    name = "withholding"

    def __init__(self, withhold_s: float):
        if math.isnan(withhold_s) or withhold_s < 0:
            raise ValueError("withhold_s must be >= 0")
        self.withhold_s = withhold_s
        self._latest = None
        self._latest_release = -math.inf

    def choose_parent(self, ledger, node, now, view):
        if self._latest is not None and self._latest_release > now:
            return self._latest
        return ledger.local_pivot_tip(view)

    def release_time(self, now):
        return now + self.withhold_s

    def on_created(self, block_id, now):
        self._latest = block_id
        self._latest_release = self.release_time(now)
