"""Line-oriented graph snapshots: ``id parent ref,ref,... miner born_at``."""

from __future__ import annotations

from typing import Iterable, TextIO

from .graph import Block, TreeGraph


class SnapshotError(ValueError):
    pass


def format_block(b: Block) -> str:
    parent = "-" if b.parent is None else str(b.parent)
    refs = ",".join(str(r) for r in sorted(b.references)) or "-"
    return f"{b.id} {parent} {refs} {b.miner} {float(b.born_at)!r}"


def parse_block(line: str, lineno: int = 0) -> Block:
    parts = line.split()
    if len(parts) != 5:
        raise SnapshotError(f"line {lineno}: expected 5 fields, got {len(parts)}")
    try:
        bid = int(parts[0])
        parent = None if parts[1] == "-" else int(parts[1])
        refs = frozenset() if parts[2] == "-" else frozenset(int(r) for r in parts[2].split(","))
        return Block(bid, parent, refs, int(parts[3]), float(parts[4]))
    except ValueError as exc:
        raise SnapshotError(f"line {lineno}: {exc}") from None


def dumps(g: TreeGraph) -> str:
    return "".join(format_block(b) + "\n" for b in g)


def dump(g: TreeGraph, fh: TextIO) -> None:
    fh.write(dumps(g))


def iter_blocks(lines: Iterable[str]):
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield parse_block(line, n)


def loads(text: str, anticone_horizon: int = 10) -> TreeGraph:
    return TreeGraph(iter_blocks(text.splitlines()), anticone_horizon=anticone_horizon)


def load(fh: TextIO, anticone_horizon: int = 10) -> TreeGraph:
    return TreeGraph(iter_blocks(fh), anticone_horizon=anticone_horizon)
