"""The eleven-block example graph (Genesis, A..J) used as a consensus fixture.

Edges are chosen so that the pivot chain is Genesis-A-C-E-H under unit
weights, Anticone(F) = {D, G}, A precedes F, and J precedes H inside H's
epoch.
"""

from __future__ import annotations

from .graph import Block, TreeGraph, genesis

NAMES = ["Genesis", "A", "B", "C", "D", "E", "F", "G", "H", "I", "J"]
ID = {name: i for i, name in enumerate(NAMES)}
NAME = {i: name for name, i in ID.items()}

# name: (parent, references)
EDGES = {
    "A": ("Genesis", ()),
    "B": ("A", ()),
    "C": ("A", ()),
    "D": ("C", ()),
    "E": ("C", ("B",)),
    "F": ("B", ("E",)),
    "G": ("C", ()),
    "J": ("F", ()),
    "I": ("J", ()),
    "H": ("E", ("I", "G", "D")),
}


def blocks() -> list[Block]:
    out = [genesis()]
    for n, (name, (parent, refs)) in enumerate(EDGES.items(), 1):
        out.append(Block(ID[name], ID[parent], frozenset(ID[r] for r in refs), born_at=float(n)))
    return out


def build(anticone_horizon: int = 10) -> TreeGraph:
    return TreeGraph(blocks(), anticone_horizon=anticone_horizon)


def names(ids) -> list[str]:
    return [NAME[i] for i in ids]
