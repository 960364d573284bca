import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from locert.corpus import random_graph
from locert.graph import LabeledGraph
from locert.layers import (
    compute_ecc_table,
    compute_eccs,
    compute_layer_partition,
    coupon_assignment,
    coverage_defects,
    layer_count,
    parse_eps,
    witnessed_graph,
)
from locert.oracles import ecc_reference

from conftest import cycle, path, star, to_nx, two_hubs

HALF = Fraction(1, 2)


def test_star_layers():
    part = compute_layer_partition(star(5), HALF)
    assert part.V(2) == {1}
    assert part.V(1) == {2, 3, 4, 5, 6}


def test_low_degree_all_first_layer():
    part = compute_layer_partition(cycle(10), HALF)
    assert part.V(2) == frozenset()
    assert part.H(1) == part.L(part.count) == frozenset(cycle(10).vertices)


def test_log_layering_boundary():
    assert layer_count(16, "log") == 4
    part = compute_layer_partition(cycle(16), "log")
    assert part.V(2) == frozenset(cycle(16).vertices)


def test_isolated_vertex_in_first_layer():
    part = compute_layer_partition(LabeledGraph([1, 2, 3], [(1, 2)]), HALF)
    assert part.layer[3] == 1


def test_parse_eps():
    assert parse_eps("1/3") == Fraction(1, 3)
    assert parse_eps("log") == "log"
    with pytest.raises(ValueError):
        parse_eps("1")


def test_hub_distance_rule():
    # hubs at distance 2 merge, at distance 3 they stay apart (k=2)
    assert compute_eccs(two_hubs(1), 2, HALF)[2] == [frozenset({1, 2})]
    assert compute_eccs(two_hubs(2), 2, HALF)[2] == [frozenset({1}), frozenset({2})]
    assert compute_eccs(cycle(10), 2, HALF)[2] == []


def test_table_star_pair():
    g = two_hubs(3)
    t = compute_ecc_table(g, 2, HALF)
    assert t[100][1] == (1, 1)
    assert t[301][1] is None
    assert all(row[0] == (min(g.vertices), 0) for row in t.values())


def test_witnessed_all_low():
    g = cycle(8)
    w = witnessed_graph(g, 2, HALF, 3)
    assert w.witnessed == frozenset(g.vertices) and w.graph == g


def test_witnessed_hub():
    g = two_hubs(3)
    w = witnessed_graph(g, 2, HALF, 1)
    part = compute_layer_partition(g, HALF)
    assert w.witnessed == part.V(1) | {1}


def test_witnessed_isolated():
    g = LabeledGraph([1, 2, 3, 4], [(1, 2)])
    assert witnessed_graph(g, 2, HALF, 4).witnessed == {4}


graphs = st.builds(lambda n, p, s: random_graph(n, p, s), st.integers(1, 30), st.sampled_from([0.05, 0.15, 0.3, 0.6]), st.integers(0, 10**6))


@settings(max_examples=60, deadline=None)
@given(graphs, st.sampled_from([HALF, Fraction(1, 3), "log"]))
def test_ecc_separation_and_cover(g, eps):
    eccs = compute_eccs(g, 2, eps)
    part = compute_layer_partition(g, eps)
    for i, classes in eccs.items():
        assert frozenset().union(*classes) == part.H(i)
        for a in range(len(classes)):
            for b in range(a + 1, len(classes)):
                da = g.distances_from(classes[a])
                assert min((da.get(x, 10**9) for x in classes[b])) >= 3


@settings(max_examples=40, deadline=None)
@given(st.builds(lambda n, p, s: random_graph(n, p, s), st.integers(1, 10), st.sampled_from([0.2, 0.4]), st.integers(0, 10**6)))
def test_eccs_match_reference(g):
    for eps in (HALF, Fraction(1, 3)):
        for i, classes in compute_eccs(g, 2, eps).items():
            assert classes == ecc_reference(g, 2, eps, i)


def test_ecc1_is_components():
    g = random_graph(25, 0.08, 3)
    assert sorted(compute_eccs(g, 2, HALF)[1], key=min) == sorted((frozenset(c) for c in nx.connected_components(to_nx(g))), key=min)


@settings(max_examples=30, deadline=None)
@given(graphs)
def test_witnessed_transitive(g):
    table = compute_ecc_table(g, 2, HALF)
    ws = {u: witnessed_graph(g, 2, HALF, u, table).witnessed for u in g.vertices}
    rng = random.Random(g.n)
    for _ in range(30):
        u, v, w = (rng.choice(g.vertices) for _ in range(3))
        if v in ws[u] and u in ws[w]:
            assert v in ws[w]


def test_coupon_examples():
    g = random_graph(50, 0.3, 1)
    one = coupon_assignment(g, 1)
    assert all(h == (1,) for h in one.held.values())
    small = coupon_assignment(path(3), 2)
    assert all(h == (1, 2) for h in small.held.values())
    ps = coupon_assignment(g, 7, seed=5)
    assert not coverage_defects(g, 7, ps.held)
    assert ps == coupon_assignment(g, 7, seed=5)


def test_coupon_repair_flags_overflow():
    g = random_graph(40, 0.2, 2)
    ps = coupon_assignment(g, 12, quota=1, retries=1)
    assert not coverage_defects(g, 12, ps.held)
    assert ps.overflow
