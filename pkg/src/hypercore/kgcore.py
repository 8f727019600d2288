"""(k,g)-core peeling, and the mutable peeling state shared with the
(k,g,p) algorithms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _accel
from .hypergraph import Hypergraph, NodeSet, Workspace, check_params
from .report import Instrumentation


class PeelState:
    """Alive nodes/hyperedges during peeling plus per-edge alive member counts.

    ``inside[e]`` is |node(e) ∩ alive| and is kept current on every node
    removal so fraction tests are O(1).
    """

    def __init__(self, hg: Hypergraph, g: int, counter: Optional[Instrumentation] = None):
        self.hg = hg
        self.g = g
        self.node_alive = np.ones(hg.node_count, dtype=np.bool_)
        self.edge_alive = np.ones(hg.edge_count, dtype=np.bool_)
        self.inside = hg.cardinalities.copy()
        self.card = hg.cardinalities
        self.counter = counter if counter is not None else Instrumentation()
        self._scratch = Workspace(hg.node_count).as_tuple()

    def neighbours(self, v: int):
        """Exact g-neighbours of ``v`` (ids, supports); counted as one call."""
        self.counter.tick()
        return _accel.neighbour_arrays(v, self.g, self.hg.csr, self.node_alive, self.edge_alive, self._scratch)

    def neighbour_sizes(self, nodes) -> np.ndarray:
        self.counter.tick(len(nodes))
        return _accel.neighbour_sizes(nodes, self.g, self.hg.csr, self.node_alive, self.edge_alive, self._scratch)

    def remove_node(self, v: int) -> None:
        self.node_alive[v] = False
        self.inside[self.hg.incident(v)] -= 1

    def alive_incident(self, v: int) -> np.ndarray:
        inc = self.hg.incident(v)
        return inc[self.edge_alive[inc]]

    def alive_members(self, e: int) -> np.ndarray:
        members = self.hg.members(e)
        return members[self.node_alive[members]]


@dataclass
class KgResult:
    alive: NodeSet
    counts: np.ndarray  # |N^g(v)| inside the core; 0 for removed nodes

    @property
    def nbr_count(self) -> dict:
        ids = self.alive.ids()
        return dict(zip(ids.tolist(), self.counts[ids].tolist()))


def peel_kg(state: PeelState, k: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Peel ``state`` down to its (k,g)-core in place; returns the
    g-neighbour counts S (valid for surviving nodes).

    Every node gets one initial count; each removed node costs one more
    neighbour-map call to find whose counts drop. ``rng`` randomizes the
    removal order (used to test order independence).
    """
    n = state.hg.node_count
    S = np.zeros(n, dtype=np.int64)
    nodes = np.flatnonzero(state.node_alive)
    if nodes.size:
        S[nodes] = state.neighbour_sizes(nodes)

    queued = np.zeros(n, dtype=np.bool_)
    start = nodes[S[nodes] < k]
    queued[start] = True
    if rng is None:
        queue = deque(start.tolist())
        pop = queue.popleft
    else:
        queue = list(rng.permutation(start).tolist())

        def pop():
            i = int(rng.integers(len(queue)))
            queue[i], queue[-1] = queue[-1], queue[i]
            return queue.pop()

    while queue:
        v = pop()
        ids, _ = state.neighbours(v)
        state.remove_node(v)
        for w in ids.tolist():
            S[w] -= 1
            if S[w] < k and not queued[w]:
                queued[w] = True
                queue.append(w)
    S[~state.node_alive] = 0
    return S


def kg_core(
    hg: Hypergraph,
    k: int,
    g: int,
    counter: Optional[Instrumentation] = None,
    rng: Optional[np.random.Generator] = None,
) -> KgResult:
    """Maximal node set in which every node has at least ``k`` neighbours
    sharing at least ``g`` hyperedges with it. Hyperedges are never removed."""
    check_params(k, g)
    state = PeelState(hg, g, counter)
    S = peel_kg(state, k, rng)
    return KgResult(NodeSet.from_mask(state.node_alive), S)
