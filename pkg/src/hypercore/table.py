"""Supporting tables: per-node histograms of neighbour support values that
give cheap lower bounds on |N^g(v)| between exact recomputations."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping, Union


class SupportingTable:
    """``hist`` maps a support value (always >= g) to how many neighbours
    have it. ``node_cnt``/``edge_cnt`` count removed g-neighbours and removed
    incident hyperedges that have not been folded into ``hist`` yet.

    ``clean`` stays true while no incident hyperedge removal has been
    recorded since the last exact rebuild.
    """

    __slots__ = ("hist", "node_cnt", "edge_cnt", "clean")

    def __init__(self, hist: Mapping[int, int] = None, node_cnt: int = 0, edge_cnt: int = 0):
        self.hist = {int(s): int(c) for s, c in (hist or {}).items() if c > 0}
        self.node_cnt = node_cnt
        self.edge_cnt = edge_cnt
        self.clean = edge_cnt == 0

    @classmethod
    def seeded(cls, g: int, size: int) -> "SupportingTable":
        """All ``size`` neighbours filed under support ``g``."""
        return cls({g: size} if size > 0 else {})

    def __repr__(self) -> str:
        return f"SupportingTable({dict(sorted(self.hist.items()))}, node_cnt={self.node_cnt}, edge_cnt={self.edge_cnt})"


def est_nbr_size(table: SupportingTable) -> int:
    return sum(table.hist.values())


def node_lb(table: SupportingTable) -> int:
    """Fold ``node_cnt`` in by discarding that many entries from the
    highest-support rows, then return the estimated size."""
    c = table.node_cnt
    hist = table.hist
    table.node_cnt = 0
    while c:
        if not hist:
            return 0
        top = max(hist)
        if c >= hist[top]:
            c -= hist.pop(top)
        else:
            hist[top] -= c
            c = 0
    return est_nbr_size(table)


def edge_lb(table: SupportingTable, g: int) -> int:
    """Fold ``edge_cnt`` in by lowering every support by that amount and
    dropping rows that fall below ``g``."""
    c = table.edge_cnt
    if c:
        table.hist = {s - c: n for s, n in table.hist.items() if s - c >= g}
        table.edge_cnt = 0
    return est_nbr_size(table)


def update_sup_table(table: SupportingTable, nbrs: Union[Mapping[int, int], Iterable[int]]) -> None:
    """Rebuild from an exact neighbour map (or just its support values)."""
    values = nbrs.values() if isinstance(nbrs, Mapping) else nbrs
    table.hist = dict(Counter(int(s) for s in values))
    table.node_cnt = 0
    table.edge_cnt = 0
    table.clean = True
