from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypercore import (
    Hypergraph,
    InvariantError,
    NodeSet,
    ParameterError,
    asap,
    check_maximality,
    fraction,
    g_neighbours,
    kg_core,
    npa,
    oracle_kgp,
)
from hypercore.peel import _RemovalQueue, iteration_limit

from conftest import random_hypergraph

ALGOS = [npa, asap]

# found by minimizing a random instance: deciding on the edge bound alone
# skips node 12 with bound 2 while its true g-neighbour count is 0
LITERAL_OVERSHOOT = [
    [3, 4, 7, 9, 12, 13, 15], [1, 2, 4, 5, 6, 7, 14, 16], [0, 1, 2, 3, 4, 6, 10],
    [1, 3, 7, 12], [0, 2, 6, 7, 9, 11, 16], [3, 7, 12, 16], [0, 2], [0, 7, 11, 16],
    [1, 4, 7, 8, 9, 13, 15], [0, 8, 10, 11, 12, 15], [0, 1, 4, 5, 7, 11, 12, 15],
    [0, 3, 10, 12, 16], [0, 5, 6, 8, 9], [1, 7, 9, 15],
]


def labels(hg, nodes):
    return sorted((hg.label(v) for v in nodes), key=lambda s: int(s[1:]))


@pytest.mark.parametrize("algo", ALGOS)
def test_toy_result(toy, algo):
    res, rep = algo(toy, 2, 2, "0.7")
    assert labels(toy, res.nodes) == ["v6", "v7", "v8", "v9"]
    assert res.edge_ids() == [2, 3]  # e3, e4
    assert res.params == (2, 2, Fraction(7, 10))
    assert rep.kg_core_nodes == 8 and rep.result_nodes == 4


def test_npa_trace(toy):
    _, rep = npa(toy, 2, 2, "0.7", trace=True)
    first, second, third = rep.trace
    assert first["weak_edges"] == [(0, 8, 12), (5, 2, 5)]
    S = {toy.label(v): s for v, s in first["candidate_counts"].items()}
    assert S == {"v5": 0, "v6": 4, "v7": 4, "v8": 4, "v9": 4, "v10": 5, "v11": 0, "v12": 1}
    assert labels(toy, first["removed_nodes"]) == ["v5", "v11", "v12"]
    assert first["next_ec"] == [1, 4]  # e2, e5
    assert second["weak_edges"] == [(1, 5, 8), (4, 1, 2)]
    assert labels(toy, second["removed_nodes"]) == ["v10"]
    assert second["next_ec"] == [2]
    assert third["weak_edges"] == []  # e3 at 4/5 survives
    assert rep.per_iteration == [(3, 2), (1, 2), (0, 0)]


def test_asap_trace(toy):
    _, rep = asap(toy, 2, 2, "0.7", trace=True)
    first = rep.trace[0]
    cnt = {toy.label(v): c for v, c in first["edge_cnt"].items()}
    assert cnt == {**{f"v{i}": 1 for i in range(5, 11)}, "v11": 2, "v12": 2}
    assert set(first["edge_lb"].values()) == {0}  # seeded tables are wiped
    assert labels(toy, first["removed_nodes"]) == ["v5", "v11", "v12"]
    v10 = toy.node_id("v10")
    assert first["node_cnt"] == [(v10, 1)]
    assert first["node_lb"] == [(v10, 4)]  # >= k, so v10 stays without a recount
    assert first["next_ec"] == [1, 4]
    assert rep.node_lb_skips >= 1


def test_asap_does_less_work_on_toy(toy):
    _, a = npa(toy, 2, 2, "0.7")
    _, b = asap(toy, 2, 2, "0.7")
    assert b.gnbr_calls_kg == a.gnbr_calls_kg
    assert b.gnbr_calls_post < a.gnbr_calls_post


@pytest.mark.parametrize("algo", ALGOS)
def test_p_zero_is_kg_core(toy, algo):
    res, rep = algo(toy, 2, 2, 0)
    assert res.nodes == kg_core(toy, 2, 2).alive
    assert rep.per_iteration == [(0, 0)]


@pytest.mark.parametrize("algo", ALGOS)
def test_parameter_errors(toy, algo):
    for k, g, p in [(0, 1, 0.5), (1, 0, 0.5), (1, 1, 1.2), (1, 1, -0.5), (1.5, 1, 0.5)]:
        with pytest.raises(ParameterError):
            algo(toy, k, g, p)


@pytest.mark.parametrize("algo", ALGOS)
def test_empty_and_degenerate(algo):
    empty = Hypergraph.from_edges([])
    res, rep = algo(empty, 1, 1, 0.5)
    assert len(res.nodes) == 0 and rep.iterations == 1
    singles = Hypergraph.from_edges([[0], [1], [0, 1]])
    res, _ = algo(singles, 1, 1, 1)
    assert sorted(res.nodes) == [0, 1]
    assert res.edge_ids() == [0, 1, 2]


def test_singleton_weak_edge_not_counted():
    # edge {0,1,2} goes weak once 2 is gone; {0} and {1} are singletons
    hg = Hypergraph.from_edges([[0, 1], [0, 1, 2, 3], [2, 3], [0], [3]])
    for p in ("0.25", "0.5", "0.75", "1"):
        ref = oracle_kgp(hg, 1, 1, p)
        for algo in ALGOS:
            assert algo(hg, 1, 1, p)[0].same_core(ref)


def test_removal_queue_order():
    q = _RemovalQueue(6)
    q.push(3, 1)
    q.push(1, 1)
    q.push(5, 2)
    q.push(3, 4)  # re-prioritized
    q.push(2, 2)
    q.remove(2)
    assert 3 in q and 2 not in q
    order = []
    while q:
        order.append(q.pop())
    assert order == [3, 5, 1]


def test_literal_bounds_overshoot_is_caught_by_node_phase():
    hg = Hypergraph.from_edges(LITERAL_OVERSHOOT)
    ref = oracle_kgp(hg, 2, 3, "0.75")
    res, rep = asap(hg, 2, 3, "0.75", debug_sound=True, literal_bounds=True)
    assert any(bound >= 2 > truth for _, phase, _, bound, truth in rep.bound_violations)
    assert res.same_core(ref)
    res, rep = asap(hg, 2, 3, "0.75", debug_sound=True)
    assert rep.bound_violations == [] and rep.exactness_violations == []
    assert res.same_core(ref)


@pytest.mark.parametrize("seed", range(30))
def test_exact_seed_variant_agrees(seed):
    hg = random_hypergraph(np.random.default_rng(seed))
    for k, g, p in [(1, 1, "0.5"), (2, 1, "0.75"), (2, 2, "0.25"), (3, 1, "1")]:
        a, _ = asap(hg, k, g, p)
        b, rep = asap(hg, k, g, p, exact_seed=True, debug_sound=True)
        assert a.same_core(b)
        assert rep.bound_violations == []


def core_is_fixed_point(hg, res, k, g, p):
    for e in res.edge_ids():
        assert not fraction(hg, e, res.nodes).below(p)
    for e in range(hg.edge_count):
        f = fraction(hg, e, res.nodes)
        if f.numerator and not f.below(p):
            assert e in res.edge_ids()
    for v in res.nodes:
        assert len(g_neighbours(hg, v, res.nodes, res.strong_edges.tolist(), g)) >= k


@pytest.mark.parametrize("seed", range(60))
def test_random_against_oracle(seed):
    hg = random_hypergraph(np.random.default_rng(seed))
    for k in (1, 2, 3):
        for g in (1, 2):
            for p in ("0", "0.4", "2/3", "1"):
                ref = oracle_kgp(hg, k, g, p)
                for algo in ALGOS:
                    res, rep = algo(hg, k, g, p)
                    assert res.same_core(ref)
                    assert rep.iterations <= iteration_limit(hg)
                core_is_fixed_point(hg, ref, k, g, Fraction(p))
                assert check_maximality(hg, k, g, p, ref)


def test_maximality_checker(toy):
    core = oracle_kgp(toy, 2, 2, "0.7")
    assert check_maximality(toy, 2, 2, "0.7", core)
    smaller = oracle_kgp(toy, 2, 2, "0.7")
    smaller.nodes = NodeSet(toy.node_count, [toy.node_id("v6"), toy.node_id("v7")])
    assert not check_maximality(toy, 2, 2, "0.7", smaller)
    hg = Hypergraph.from_edges([[0, 1]])
    assert check_maximality(hg, 3, 1, "0.5", npa(hg, 3, 1, "0.5")[0])


def test_single_node_readdition_breaks_validity(toy):
    # adding any removed node back alone does not give a valid larger core
    k, g, p = 2, 2, Fraction(7, 10)
    res, _ = npa(toy, k, g, p)
    for u in range(toy.node_count):
        if u in res.nodes:
            continue
        bigger = res.nodes.copy()
        bigger.add(u)
        strong = [e for e in range(toy.edge_count)
                  if fraction(toy, e, bigger).numerator and not fraction(toy, e, bigger).below(p)]
        assert any(len(g_neighbours(toy, v, bigger, strong, g)) < k for v in bigger)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(0, 9), min_size=2, max_size=5), min_size=1, max_size=14),
    st.integers(1, 3), st.integers(1, 2), st.sampled_from(["0", "0.3", "0.5", "0.6", "1"]),
)
def test_hypothesis_differential(edges, k, g, p):
    hg = Hypergraph.from_edges(edges, node_count=10)
    ref = oracle_kgp(hg, k, g, p)
    a, ra = npa(hg, k, g, p)
    b, rb = asap(hg, k, g, p, debug_sound=True)
    assert a.same_core(ref) and b.same_core(ref)
    assert rb.bound_violations == [] and rb.exactness_violations == []
    assert rb.gnbr_calls <= ra.gnbr_calls


def test_iteration_limit_guard(monkeypatch, toy):
    import hypercore.peel as peel

    monkeypatch.setattr(peel, "iteration_limit", lambda hg: 1)
    with pytest.raises(InvariantError):
        npa(toy, 2, 2, "0.7")
