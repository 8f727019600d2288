"""
(k,g,p)-core peeling.

``npa`` recomputes the g-neighbour map of every node touched by a hyperedge
removal. ``asap`` keeps a supporting table per node and only recomputes when
a lower bound read from the table drops below ``k``. Both alternate a
hyperedge phase (drop weak hyperedges) with a node phase (cascade removals of
nodes left with fewer than ``k`` g-neighbours) until no candidate hyperedge
remains.
"""

from __future__ import annotations

import heapq
import time
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvariantError
from .hypergraph import Hypergraph, NodeSet, check_params, format_threshold, is_weak
from .kgcore import PeelState, peel_kg
from .report import Instrumentation, RunReport
from .table import SupportingTable, edge_lb, node_lb, update_sup_table


@dataclass
class CoreResult:
    nodes: NodeSet
    strong_edges: np.ndarray  # sorted surviving hyperedge ids
    k: int
    g: int
    p: Fraction

    @property
    def params(self) -> tuple:
        return (self.k, self.g, self.p)

    def node_ids(self) -> list:
        return sorted(self.nodes)

    def edge_ids(self) -> list:
        return self.strong_edges.tolist()

    def labels(self, hg: Hypergraph) -> list:
        return sorted(hg.label(v) for v in self.nodes)

    def same_core(self, other: "CoreResult") -> bool:
        return self.nodes == other.nodes and np.array_equal(self.strong_edges, other.strong_edges)


def iteration_limit(hg: Hypergraph) -> int:
    # a run always makes one pass, even on an empty hypergraph
    return max(1, min(hg.node_count, hg.edge_count))


def _start(hg, k, g, p, algo):
    threshold = check_params(k, g, p)
    counter = Instrumentation()
    report = RunReport(algo, k, g, format_threshold(threshold))
    state = PeelState(hg, g, counter)
    return threshold, counter, report, state


def _post_kg(state: PeelState) -> list:
    # E' = hyperedges meeting the (k,g)-core
    state.edge_alive[:] = state.inside > 0
    return np.flatnonzero(state.edge_alive).tolist()


def _finish(hg, state, counter, report, threshold, k, g, t0, t1) -> CoreResult:
    t2 = time.perf_counter()
    report.gnbr_calls_kg = counter.calls["kg"]
    report.gnbr_calls_post = counter.calls["post"]
    report.kg_time = t1 - t0
    report.post_time = t2 - t1
    report.wall_time = t2 - t0
    result = CoreResult(NodeSet.from_mask(state.node_alive), np.flatnonzero(state.edge_alive), k, g, threshold)
    report.result_nodes = len(result.nodes)
    report.result_edges = int(result.strong_edges.size)
    if report.iterations > iteration_limit(hg):
        raise InvariantError(f"{report.iterations} iterations exceed min(|V|,|E|) = {iteration_limit(hg)}")
    removed = sum(n for n, _ in report.per_iteration)
    if removed != report.kg_core_nodes - report.result_nodes:
        raise InvariantError("per-iteration node removals do not add up")
    return result


def npa(hg: Hypergraph, k: int, g: int, p, trace: bool = False):
    """Naive peeling: every candidate node gets an exact recount.

    Returns ``(CoreResult, RunReport)``.
    """
    threshold, counter, report, state = _start(hg, k, g, p, "npa")
    t0 = time.perf_counter()
    S = peel_kg(state, k)
    t1 = time.perf_counter()
    report.kg_core_nodes = int(state.node_alive.sum())
    counter.phase = "post"
    if trace:
        report.trace = []

    in_vq = np.zeros(hg.node_count, dtype=np.bool_)
    card = state.card
    EC = _post_kg(state)
    while True:
        nodes_removed = edges_removed = 0
        weak = []
        VC = {}
        for e in EC:
            if state.edge_alive[e] and is_weak(int(state.inside[e]), int(card[e]), threshold):
                weak.append((e, int(state.inside[e]), int(card[e])))
                for v in state.alive_members(e).tolist():
                    VC[v] = None
                state.edge_alive[e] = False
                edges_removed += 1

        VQ = deque()
        for v in VC:
            ids, _ = state.neighbours(v)
            S[v] = ids.size
            if S[v] < k:
                VQ.append(v)
                in_vq[v] = True
        candidate_counts = {v: int(S[v]) for v in VC}

        next_ec = set()
        removed = []
        while VQ:
            v = VQ.popleft()
            in_vq[v] = False
            next_ec.update(state.alive_incident(v).tolist())
            ids, _ = state.neighbours(v)
            state.remove_node(v)
            removed.append(v)
            nodes_removed += 1
            for w in ids.tolist():
                if not in_vq[w]:
                    S[w] -= 1
                    if S[w] < k:
                        VQ.append(w)
                        in_vq[w] = True

        EC = sorted(next_ec)
        report.iterations += 1
        report.per_iteration.append((nodes_removed, edges_removed))
        if trace:
            report.trace.append({
                "weak_edges": weak,
                "candidate_counts": candidate_counts,
                "removed_nodes": removed,
                "next_ec": EC,
            })
        if not EC:
            break

    result = _finish(hg, state, counter, report, threshold, k, g, t0, t1)
    return result, report


class _RemovalQueue:
    """Max-priority on node_cnt, ties broken by smaller node id.

    Re-pushing a node invalidates its previous heap entry.
    """

    def __init__(self, n: int):
        self._heap = []
        self._stamp = np.zeros(n, dtype=np.int64)
        self._in = np.zeros(n, dtype=np.bool_)

    def __contains__(self, v) -> bool:
        return bool(self._in[v])

    def __bool__(self) -> bool:
        return bool(self._heap) and self._skip_stale()

    def _skip_stale(self) -> bool:
        heap = self._heap
        while heap:
            _, v, stamp = heap[0]
            if self._in[v] and self._stamp[v] == stamp:
                return True
            heapq.heappop(heap)
        return False

    def push(self, v: int, priority: int) -> None:
        self._stamp[v] += 1
        self._in[v] = True
        heapq.heappush(self._heap, (-priority, v, int(self._stamp[v])))

    def remove(self, v: int) -> None:
        self._in[v] = False

    def pop(self) -> int:
        self._skip_stale()
        _, v, _ = heapq.heappop(self._heap)
        self._in[v] = False
        return v


def _true_size(state: PeelState, v: int) -> int:
    """Brute-force |N^g(v)| straight from the incidence lists; uncounted."""
    hg = state.hg
    co = Counter()
    for e in hg.incident(v).tolist():
        if state.edge_alive[e]:
            for u in hg.members(e).tolist():
                if u != v and state.node_alive[u]:
                    co[u] += 1
    return sum(1 for c in co.values() if c >= state.g)


def asap(
    hg: Hypergraph,
    k: int,
    g: int,
    p,
    trace: bool = False,
    debug_sound: bool = False,
    exact_seed: bool = False,
    literal_bounds: bool = False,
):
    """Peeling with supporting-table lower bounds.

    ``exact_seed`` fills the initial tables with true support histograms
    (one extra neighbour-map call per core node) instead of filing every
    neighbour under support ``g``. ``debug_sound`` brute-forces the true
    g-neighbour count at every bound evaluation and records violations on the
    report.

    A candidate node can carry a pending ``node_cnt`` when one of its
    g-neighbours was removed earlier in the same candidate pass; the edge
    bound alone still counts that neighbour, so the pending count is folded
    in (``node_lb``) before the skip decision. ``literal_bounds`` disables the
    fold and decides on the edge bound alone.

    Returns ``(CoreResult, RunReport)``.
    """
    threshold, counter, report, state = _start(hg, k, g, p, "asap")
    t0 = time.perf_counter()
    S = peel_kg(state, k)
    core = np.flatnonzero(state.node_alive).tolist()
    tables = {}
    if exact_seed:
        for v in core:
            table = tables[v] = SupportingTable()
            update_sup_table(table, state.neighbours(v)[1].tolist())
    else:
        for v in core:
            tables[v] = SupportingTable.seeded(g, int(S[v]))
    t1 = time.perf_counter()
    report.kg_core_nodes = len(core)
    counter.phase = "post"
    if trace:
        report.trace = []

    PQ = _RemovalQueue(hg.node_count)
    card = state.card
    EC = _post_kg(state)
    iteration = 0
    events = None

    def check(v, bound, phase, clean=False):
        truth = _true_size(state, v)
        report.bound_checks += 1
        if bound > truth:
            report.bound_violations.append((iteration, phase, v, bound, truth))
        if clean:
            report.exactness_checks += 1
            if bound != truth:
                report.exactness_violations.append((iteration, phase, v, bound, truth))

    def recheck(v):
        nonlocal nodes_removed
        ids, sups = state.neighbours(v)
        if events is not None:
            events["recomputed"][v] = int(ids.size)
        if ids.size < k:
            next_ec.update(state.alive_incident(v).tolist())
            state.remove_node(v)
            del tables[v]
            PQ.remove(v)
            nodes_removed += 1
            if events is not None:
                events["removed_nodes"].append(v)
            for w in ids.tolist():
                t = tables[w]
                t.node_cnt += 1
                PQ.remove(w)
                PQ.push(w, t.node_cnt)
                if events is not None:
                    events["node_cnt"].append((w, t.node_cnt))
        else:
            update_sup_table(tables[v], sups.tolist())

    while True:
        iteration += 1
        nodes_removed = edges_removed = 0
        if trace:
            events = {
                "weak_edges": [],
                "edge_cnt": {},
                "edge_lb": {},
                "recomputed": {},
                "removed_nodes": [],
                "node_cnt": [],
                "node_lb": [],
            }
            report.trace.append(events)

        VC = {}
        for e in EC:
            if state.edge_alive[e] and is_weak(int(state.inside[e]), int(card[e]), threshold):
                members = state.alive_members(e).tolist()
                if events is not None:
                    events["weak_edges"].append((e, int(state.inside[e]), int(card[e])))
                if len(members) > 1:
                    for v in members:
                        t = tables[v]
                        t.edge_cnt += 1
                        t.clean = False
                        VC[v] = None
                state.edge_alive[e] = False
                edges_removed += 1
        if events is not None:
            events["edge_cnt"] = {v: tables[v].edge_cnt for v in VC}

        next_ec = set()
        for v in VC:
            t = tables[v]
            bound = edge_lb(t, g)
            if t.node_cnt and not literal_bounds:
                bound = node_lb(t)
            if debug_sound:
                check(v, bound, "edge")
            if events is not None:
                events["edge_lb"][v] = bound
            if bound < k:
                recheck(v)
            else:
                report.edge_lb_skips += 1

        while PQ:
            v = PQ.pop()
            t = tables[v]
            clean = t.clean
            bound = node_lb(t)
            if debug_sound:
                check(v, bound, "node", clean)
            if events is not None:
                events["node_lb"].append((v, bound))
            if bound < k:
                recheck(v)
            else:
                report.node_lb_skips += 1

        EC = sorted(next_ec)
        report.iterations += 1
        report.per_iteration.append((nodes_removed, edges_removed))
        if events is not None:
            events["next_ec"] = EC
        if not EC:
            break

    result = _finish(hg, state, counter, report, threshold, k, g, t0, t1)
    return result, report


ALGORITHMS = {"npa": npa, "asap": asap}
