"""
Brute-force reference cores and the 15-node toy hypergraph.

Nothing here shares code with the peeling modules: g-neighbour counts are
recomputed from plain Python sets on every pass and all violators are dropped
at once, so the fixed point reached does not depend on any removal order.
Exponentially slower than ``peel``; meant for small instances only.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional

import numpy as np

from .hypergraph import Hypergraph, NodeSet, check_params, load_hypergraph

TOY_FILE = "toy.hg"


def toy_fixture() -> Hypergraph:
    """e1={v1..v12}, e2={v5..v12}, e3={v6..v10}, e4={v6..v9}, e5={v10,v12},
    e6={v11..v15}; node ``vi`` gets dense id i-1, hyperedge ``ej`` id j-1."""
    with resources.files("hypercore").joinpath("data", TOY_FILE).open("rb") as fh:
        return load_hypergraph(fh)


def _edge_sets(hg: Hypergraph) -> list:
    return [set(hg.members(e).tolist()) for e in range(hg.edge_count)]


def _nbr_sizes(edge_sets, edges, alive, g) -> dict:
    co = {v: Counter() for v in alive}
    for e in edges:
        inside = edge_sets[e] & alive
        for v in inside:
            for u in inside:
                if u != v:
                    co[v][u] += 1
    return {v: sum(1 for c in co[v].values() if c >= g) for v in alive}


def oracle_kg(hg: Hypergraph, k: int, g: int) -> NodeSet:
    check_params(k, g)
    edge_sets = _edge_sets(hg)
    edges = range(len(edge_sets))
    alive = set(range(hg.node_count))
    while True:
        sizes = _nbr_sizes(edge_sets, edges, alive, g)
        keep = {v for v in alive if sizes[v] >= k}
        if keep == alive:
            return NodeSet(hg.node_count, alive)
        alive = keep


def _strong(edge_sets, alive, p: Fraction) -> list:
    out = []
    for e, members in enumerate(edge_sets):
        inside = len(members & alive)
        if inside and Fraction(inside, len(members)) >= p:
            out.append(e)
    return out


def oracle_kgp(hg: Hypergraph, k: int, g: int, p):
    """Alternate "keep strong hyperedges" and "keep nodes with >= k
    g-neighbours over them" until neither changes."""
    from .peel import CoreResult

    p = check_params(k, g, p)
    edge_sets = _edge_sets(hg)
    alive = set(range(hg.node_count))
    while True:
        strong = _strong(edge_sets, alive, p)
        sizes = _nbr_sizes(edge_sets, strong, alive, g)
        keep = {v for v in alive if sizes[v] >= k}
        if keep == alive:
            break
        alive = keep
    return CoreResult(NodeSet(hg.node_count, alive), np.array(strong, dtype=np.int64), k, g, p)


def check_maximality(hg: Hypergraph, k: int, g: int, p, result) -> bool:
    """True iff ``result`` is the unique maximal (k,g,p)-core of ``hg``."""
    return oracle_kgp(hg, k, g, p).nodes == result.nodes


def induced(hg: Hypergraph, nodes) -> Hypergraph:
    """Sub-hypergraph keeping only ``nodes`` inside every hyperedge; node ids
    and labels are preserved and emptied hyperedges dropped."""
    keep = set(nodes)
    edges = []
    for e in range(hg.edge_count):
        members = [u for u in hg.members(e).tolist() if u in keep]
        if members:
            edges.append(members)
    return Hypergraph.from_edges(edges, node_count=hg.node_count, labels=hg.labels)


def minimize(hg: Hypergraph, failing: Callable[[Hypergraph], bool]) -> Hypergraph:
    """Greedily drop hyperedges while ``failing`` still holds."""
    edges = [hg.members(e).tolist() for e in range(hg.edge_count)]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(edges):
            trial = edges[:i] + edges[i + 1:]
            candidate = Hypergraph.from_edges(trial, node_count=hg.node_count, labels=hg.labels)
            if failing(candidate):
                edges = trial
                changed = True
            else:
                i += 1
    return Hypergraph.from_edges(edges, node_count=hg.node_count, labels=hg.labels)


def compare(hg: Hypergraph, k: int, g: int, p) -> Optional[str]:
    """Run oracle, npa and asap; describe the first disagreement, or None."""
    from .peel import asap, npa

    ref = oracle_kgp(hg, k, g, p)
    for name, fn in (("npa", npa), ("asap", asap)):
        got, _ = fn(hg, k, g, p)
        if got.nodes != ref.nodes:
            return f"{name} nodes {got.labels(hg)} != oracle {ref.labels(hg)}"
        if not np.array_equal(got.strong_edges, ref.strong_edges):
            return f"{name} strong edges {got.edge_ids()} != oracle {ref.edge_ids()}"
    return None


def _names(hg, ids):
    return "{" + ",".join(hg.label(v) for v in sorted(ids)) + "}"


def replay_toy() -> list:
    """Re-derive every quantity quoted for the toy hypergraph with (k,g,p) =
    (2,2,0.7) using only this module. Raises AssertionError on the first
    disagreement; returns the log lines otherwise."""
    hg = toy_fixture()
    sets = _edge_sets(hg)
    v = {hg.label(i): i for i in range(hg.node_count)}
    k, g, p = 2, 2, Fraction(7, 10)
    lines = []

    def claim(text, expected, observed):
        if expected != observed:
            raise AssertionError(f"{text}: expected {expected}, observed {observed}")
        lines.append(f"OK  {text}: {observed}")

    def ids(*names):
        return {v[n] for n in names}

    def span(a, b):
        return {v[f"v{i}"] for i in range(a, b + 1)}

    all_edges = range(len(sets))
    co6 = Counter()
    for e in all_edges:
        if v["v6"] in sets[e]:
            for u in sets[e] - {v["v6"]}:
                co6[u] += 1
    table6 = dict(sorted(Counter(c for c in co6.values() if c >= g).items()))
    claim("supporting table of v6 (support -> neighbours)", {2: 3, 3: 1, 4: 3}, table6)
    claim("support(v6,v7)", 4, co6[v["v7"]])
    claim("support(v6,v10)", 3, co6[v["v10"]])
    claim("support-2 neighbours of v6", _names(hg, ids("v5", "v11", "v12")),
          _names(hg, {u for u, c in co6.items() if c == 2}))

    core = set(oracle_kg(hg, k, g))
    claim("(2,2)-core", _names(hg, span(5, 12)), _names(hg, core))

    frac = {e: Fraction(len(sets[e] & core), len(sets[e])) for e in all_edges}
    claim("f(e1) over the (2,2)-core", Fraction(8, 12), frac[0])
    claim("f(e6) over the (2,2)-core", Fraction(2, 5), frac[5])
    weak1 = {e for e in all_edges if sets[e] & core and frac[e] < p}
    claim("weak hyperedges, iteration 1", {0, 5}, weak1)

    edge_cnt = Counter()
    for e in weak1:
        inside = sets[e] & core
        if len(inside) > 1:
            for u in inside:
                edge_cnt[u] += 1
    claim("edgeCnt of v5..v10 after the first hyperedge pass", [1] * 6,
          [edge_cnt[u] for u in sorted(span(5, 10))])
    claim("edgeCnt of v11,v12", [2, 2], [edge_cnt[v["v11"]], edge_cnt[v["v12"]]])

    alive_edges = [e for e in all_edges if sets[e] & core and e not in weak1]
    S = _nbr_sizes(sets, alive_edges, core, g)
    claim("S[v6..v9]", [4, 4, 4, 4], [S[u] for u in sorted(span(6, 9))])
    claim("S[v10]", 5, S[v["v10"]])
    claim("S[v5], S[v11]", [0, 0], [S[v["v5"]], S[v["v11"]]])
    claim("S[v12]", 1, S[v["v12"]])
    removed1 = {u for u in core if S[u] < k}
    claim("nodes removed, iteration 1", _names(hg, ids("v5", "v11", "v12")), _names(hg, removed1))
    alive = core - removed1
    S_after = _nbr_sizes(sets, alive_edges, alive, g)
    claim("S[v10] once v5,v11,v12 are gone", 4, S_after[v["v10"]])
    ec = {e for e in alive_edges if sets[e] & removed1}
    claim("candidate hyperedges EC", {1, 4}, ec)

    frac2 = {e: Fraction(len(sets[e] & alive), len(sets[e])) for e in ec}
    claim("f(e2), f(e5) in iteration 2", "5/8, 1/2", f"{frac2[1]}, {frac2[4]}")
    weak2 = {e for e in ec if frac2[e] < p}
    claim("weak hyperedges, iteration 2", {1, 4}, weak2)
    alive_edges = [e for e in alive_edges if e not in weak2]
    S2 = _nbr_sizes(sets, alive_edges, alive, g)
    removed2 = {u for u in alive if S2[u] < k}
    claim("nodes removed, iteration 2", _names(hg, ids("v10")), _names(hg, removed2))
    alive -= removed2
    claim("f(e3) after v10 leaves", Fraction(4, 5), Fraction(len(sets[2] & alive), len(sets[2])))
    claim("e3 stays strong", True, Fraction(len(sets[2] & alive), len(sets[2])) >= p)

    final = oracle_kgp(hg, k, g, p)
    claim("(2,2,0.7)-core", _names(hg, span(6, 9)), _names(hg, final.nodes))
    claim("(2,2,0.7)-core from the hand replay", _names(hg, span(6, 9)), _names(hg, alive))
    claim("surviving strong hyperedges", [2, 3], final.edge_ids())
    return lines


def write_proof_log(path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# toy.hg replay at (k,g,p) = (2,2,0.7); regenerate with python -m hypercore.oracle\n")
        for line in replay_toy():
            fh.write(line + "\n")


if __name__ == "__main__":
    import sys

    write_proof_log(sys.argv[1] if len(sys.argv) > 1 else str(resources.files("hypercore").joinpath("data", "toy_proof.log")))
