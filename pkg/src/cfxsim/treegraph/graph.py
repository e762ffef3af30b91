"""Append-only TreeGraph: parent tree embedded in a reference DAG.

Reachability is kept as Python-int bitsets indexed by insertion slot, so
past sets are built incrementally at insertion and future sets, pivot chain
and epochs are derived lazily and cached until the next insertion.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

GENESIS_ID = 0
DEFAULT_HORIZON = 10
_MAX_ID = 2**64 - 1


class TreeGraphError(ValueError):
    pass


class DuplicateBlockError(TreeGraphError):
    pass


class DanglingEdgeError(TreeGraphError):
    pass


class InvalidBlockError(TreeGraphError):
    pass


class UnknownBlockError(TreeGraphError, KeyError):
    pass


class NotEpochedError(TreeGraphError):
    """The block is not yet reachable from the pivot tip."""


@dataclass(frozen=True)
class Block:
    id: int
    parent: Optional[int] = None
    references: frozenset = field(default_factory=frozenset)
    miner: int = 0
    born_at: float = 0.0
    tx_ids: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "references", frozenset(self.references))
        object.__setattr__(self, "tx_ids", tuple(self.tx_ids))

    @property
    def is_genesis(self) -> bool:
        return self.parent is None

    def predecessors(self) -> Iterator[int]:
        if self.parent is not None:
            yield self.parent
        yield from self.references


@dataclass(frozen=True)
class Epoch:
    index: int
    pivot_block: int
    members: tuple


def genesis(miner: int = 0, born_at: float = 0.0) -> Block:
    return Block(GENESIS_ID, None, frozenset(), miner, born_at)


class TreeGraph:
    """Blocks plus derived consensus structures.

    Derived views (pivot chain, epochs, total order, anticones) depend only
    on the block set, never on the order in which blocks were inserted.
    """

    def __init__(self, blocks: Iterable[Block] = (), anticone_horizon: int = DEFAULT_HORIZON):
        if anticone_horizon < 0:
            raise ValueError("anticone_horizon must be non-negative")
        self.anticone_horizon = anticone_horizon
        self._blocks: list[Block] = []
        self._slot: dict[int, int] = {}
        self._children: list[list[int]] = []  # parent tree, by slot
        self._succ: list[list[int]] = []  # every inbound edge, by slot
        self._past: list[int] = []  # bitset incl. self
        self._invalidate()
        for b in blocks:
            self.insert(b)

    # -- mutation ---------------------------------------------------------

    def insert(self, b: Block) -> "TreeGraph":
        if not 0 <= b.id <= _MAX_ID:
            raise InvalidBlockError(f"block id {b.id} outside unsigned 64-bit range")
        if b.id in self._slot:
            raise DuplicateBlockError(f"duplicate block id {b.id}")
        if b.parent is None:
            if self._blocks:
                raise InvalidBlockError(f"block {b.id} has no parent but genesis exists")
            if b.id != GENESIS_ID or b.references:
                raise InvalidBlockError("genesis must have id 0 and no references")
        else:
            if not self._blocks:
                raise InvalidBlockError("first block must be genesis")
            if b.id in b.references or b.parent == b.id:
                raise InvalidBlockError(f"block {b.id} references itself")
            if b.parent in b.references:
                raise InvalidBlockError(f"block {b.id}: parent {b.parent} also listed as reference")
            for p in b.predecessors():
                if p not in self._slot:
                    raise DanglingEdgeError(f"dangling edge: block {b.id} -> {p}")

        s = len(self._blocks)
        past = 1 << s
        for p in b.predecessors():
            ps = self._slot[p]
            past |= self._past[ps]
            self._succ[ps].append(s)
        if b.parent is not None:
            self._children[self._slot[b.parent]].append(s)
        self._blocks.append(b)
        self._slot[b.id] = s
        self._children.append([])
        self._succ.append([])
        self._past.append(past)
        self._invalidate()
        return self

    def _invalidate(self) -> None:
        self._pivot: Optional[list[int]] = None
        self._epoch_of: Optional[dict[int, int]] = None
        self._future: Optional[list[int]] = None
        self._order: Optional[list[int]] = None

    # -- basic access -----------------------------------------------------

    def __len__(self) -> int:
        return len(self._blocks)

    def __contains__(self, block_id: int) -> bool:
        return block_id in self._slot

    def __iter__(self) -> Iterator[Block]:
        return iter(self._blocks)

    def block(self, block_id: int) -> Block:
        return self._blocks[self._idx(block_id)]

    def ids(self) -> list[int]:
        return [b.id for b in self._blocks]

    def children(self, block_id: int) -> list[int]:
        return sorted(self._blocks[c].id for c in self._children[self._idx(block_id)])

    def tips(self) -> list[int]:
        """Blocks without any inbound parent or reference edge."""
        return sorted(b.id for s, b in enumerate(self._blocks) if not self._succ[s])

    def _idx(self, block_id: int) -> int:
        try:
            return self._slot[block_id]
        except KeyError:
            raise UnknownBlockError(f"unknown block id {block_id}") from None

    def _ids_of(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self._blocks[low.bit_length() - 1].id)
            mask ^= low
        return out

    # -- reachability -----------------------------------------------------

    def past(self, block_id: int) -> set[int]:
        """Blocks reachable from ``block_id`` (excluding itself)."""
        s = self._idx(block_id)
        return set(self._ids_of(self._past[s] & ~(1 << s)))

    def future(self, block_id: int) -> set[int]:
        """Blocks that reach ``block_id`` (excluding itself)."""
        s = self._idx(block_id)
        return set(self._ids_of(self._future_masks()[s] & ~(1 << s)))

    def _future_masks(self) -> list[int]:
        if self._future is None:
            fut = [0] * len(self._blocks)
            for s in range(len(self._blocks) - 1, -1, -1):
                m = 1 << s
                for t in self._succ[s]:
                    m |= fut[t]
                fut[s] = m
            self._future = fut
        return self._future

    # -- consensus views --------------------------------------------------

    def _pivot_slots(self) -> list[int]:
        if self._pivot is None:
            if not self._blocks:
                raise TreeGraphError("empty graph has no pivot chain")
            size = [1] * len(self._blocks)
            # slots are past-closed, so a parent always precedes its children
            for s in range(len(self._blocks) - 1, 0, -1):
                size[self._slot[self._blocks[s].parent]] += size[s]
            chain = [self._slot[GENESIS_ID]]
            while self._children[chain[-1]]:
                kids = self._children[chain[-1]]
                chain.append(min(kids, key=lambda c: (-size[c], self._blocks[c].id)))
            self._pivot = chain
        return self._pivot

    def pivot_chain(self) -> list[int]:
        return [self._blocks[s].id for s in self._pivot_slots()]

    def pivot_tip(self) -> int:
        return self._blocks[self._pivot_slots()[-1]].id

    def _epoch_masks(self) -> list[int]:
        pivot = self._pivot_slots()
        masks, prev = [], 0
        for p in pivot:
            masks.append(self._past[p] & ~prev)
            prev = self._past[p]
        return masks

    def _topo(self, mask: int) -> list[int]:
        """Topological order of the slots in ``mask``; ties by smaller BlockId."""
        members = []
        m = mask
        while m:
            low = m & -m
            members.append(low.bit_length() - 1)
            m ^= low
        indeg = {}
        for s in members:
            indeg[s] = sum(1 for p in self._blocks[s].predecessors() if (mask >> self._slot[p]) & 1)
        heap = [(self._blocks[s].id, s) for s in members if indeg[s] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            _, s = heapq.heappop(heap)
            out.append(s)
            for t in self._succ[s]:
                if (mask >> t) & 1:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        heapq.heappush(heap, (self._blocks[t].id, t))
        return out

    def partition_epochs(self) -> list[Epoch]:
        pivot = self._pivot_slots()
        return [
            Epoch(i, self._blocks[p].id, tuple(self._blocks[s].id for s in self._topo(mask)))
            for i, (p, mask) in enumerate(zip(pivot, self._epoch_masks()))
        ]

    def unepoched(self) -> list[int]:
        """Blocks not reachable from the pivot tip."""
        every = (1 << len(self._blocks)) - 1
        return sorted(self._ids_of(every & ~self._past[self._pivot_slots()[-1]]))

    def _epoch_index(self) -> dict[int, int]:
        if self._epoch_of is None:
            epoch_of = {}
            for i, mask in enumerate(self._epoch_masks()):
                while mask:
                    low = mask & -mask
                    epoch_of[low.bit_length() - 1] = i
                    mask ^= low
            self._epoch_of = epoch_of
        return self._epoch_of

    def epoch_of(self, block_id: int) -> Optional[int]:
        """Epoch index of a block, or None while it is unepoched."""
        return self._epoch_index().get(self._idx(block_id))

    def total_order(self) -> list[int]:
        if self._order is None:
            order = []
            for mask in self._epoch_masks():
                order.extend(self._topo(mask))
            self._order = order
        return [self._blocks[s].id for s in self._order]

    # -- anticone ---------------------------------------------------------

    def anticone_mask(self, block_id: int) -> int:
        s = self._idx(block_id)
        e = self._epoch_index().get(s)
        if e is None:
            raise NotEpochedError(f"block {block_id} is not yet epoched")
        pivot = self._pivot_slots()
        # union of epochs 0..k is exactly the past of the k-th pivot block
        window = self._past[pivot[min(e + self.anticone_horizon, len(pivot) - 1)]]
        return window & ~self._past[s] & ~self._future_masks()[s]

    def anticone(self, block_id: int) -> set[int]:
        return set(self._ids_of(self.anticone_mask(block_id)))

    def anticone_size(self, block_id: int) -> int:
        return self.anticone_mask(block_id).bit_count()

    def is_mature(self, block_id: int) -> bool:
        """True once the pivot chain extends a full horizon past the block's epoch."""
        e = self.epoch_of(block_id)
        return e is not None and len(self._pivot_slots()) - 1 >= e + self.anticone_horizon

    def subgraph(self, keep) -> "TreeGraph":
        """Past-closed restriction to blocks for which ``keep(block)`` holds."""
        g = TreeGraph(anticone_horizon=self.anticone_horizon)
        for b in self._blocks:
            if keep(b):
                g.insert(b)
        return g
