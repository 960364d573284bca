import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms import isomorphism

from locert.corpus import random_graph
from locert.graph import LabeledGraph
from locert.oracles import (
    OracleResourceError,
    PathConstraint,
    contains,
    ecc_reference,
    find_induced_embedding,
    has_induced_path,
    is_induced_path,
    longest_induced_path,
)
from locert.layers import compute_eccs

from conftest import PAW, clique, cycle, from_nx, path, star, to_nx


def test_c5_contains_p4():
    emb = find_induced_embedding(cycle(5), path(4), "induced")
    assert emb is not None
    assert is_induced_path(cycle(5), [emb[i] for i in range(1, 5)])


def test_bipartite_has_no_triangle():
    g = from_nx(nx.complete_bipartite_graph(3, 4))
    assert find_induced_embedding(g, clique(3), "subgraph") is None


def test_c7_p7_modes():
    assert find_induced_embedding(cycle(7), path(7), "induced") is None
    assert find_induced_embedding(cycle(7), path(7), "subgraph") is not None


def test_embedding_cap():
    with pytest.raises(OracleResourceError):
        find_induced_embedding(path(20), path(17))


def test_longest_in_clique_from_vertex():
    assert longest_induced_path(clique(5), PathConstraint(start=1)).count == 2


def test_longest_in_c5():
    assert longest_induced_path(cycle(5)).count == 4


def test_longest_star_avoid():
    g = star(4)
    # the exempt center continues into a leaf outside N[2]
    assert longest_induced_path(g, PathConstraint(start=1, avoid_closed_neighborhood_of=2)).count == 2
    assert longest_induced_path(g, PathConstraint(start=1, allowed=frozenset({1, 2}), avoid_closed_neighborhood_of=2)).count == 1
    # a start that is not exempt: allowed set without N[2] and no named start
    assert longest_induced_path(g, PathConstraint(allowed=frozenset({1}), avoid_closed_neighborhood_of=2)).count == 0


def test_longest_start_excluded_from_graph():
    assert longest_induced_path(path(3), PathConstraint(start=9)).count == 0


def test_two_paths():
    # 1-2-3 and 5-6-7; vertex 4 would join them
    r = longest_induced_path(path(7), PathConstraint(start=1, two_path_partner=7))
    assert r.count == 6
    assert longest_induced_path(path(3), PathConstraint(start=1, two_path_partner=3)).count == 2


def _nx_longest_induced(g: LabeledGraph, start=None) -> int:
    best = 0
    h = to_nx(g)
    for size in range(1, g.n + 1):
        for sub in itertools.combinations(g.vertices, size):
            s = h.subgraph(sub)
            if start is not None and start not in sub:
                continue
            if nx.is_connected(s) and s.number_of_edges() == size - 1 and max(dict(s.degree).values(), default=0) <= 2:
                if start is None or s.degree(start) <= 1:
                    best = size
                    break
    return best


graphs = st.builds(lambda n, p, s: random_graph(n, p, s), st.integers(1, 9), st.sampled_from([0.2, 0.35, 0.5]), st.integers(0, 10**6))


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_longest_matches_subset_enumeration(g):
    assert longest_induced_path(g).count == _nx_longest_induced(g)
    v = g.vertices[0]
    assert longest_induced_path(g, PathConstraint(start=v)).count == _nx_longest_induced(g, v)


@settings(max_examples=60, deadline=None)
@given(graphs, st.data())
def test_longest_monotone_in_allowed(g, data):
    a = frozenset(data.draw(st.sets(st.sampled_from(g.vertices))))
    b = a | frozenset(data.draw(st.sets(st.sampled_from(g.vertices))))
    assert longest_induced_path(g, PathConstraint(allowed=a)).count <= longest_induced_path(g, PathConstraint(allowed=b)).count


PATTERNS = [path(3), path(4), cycle(4), cycle(5), star(3), PAW, clique(3)]


@settings(max_examples=60, deadline=None)
@given(graphs, st.sampled_from(PATTERNS))
def test_embedding_matches_networkx(g, h):
    gm = isomorphism.GraphMatcher(to_nx(g), to_nx(h))
    assert contains(g, h, "induced") == gm.subgraph_is_isomorphic()
    assert contains(g, h, "subgraph") == gm.subgraph_is_monomorphic()


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(3, 5))
def test_clique_modes_agree(g, q):
    assert contains(g, clique(q), "induced") == contains(g, clique(q), "subgraph")


def test_has_induced_path():
    assert has_induced_path(path(7), 7)
    assert not has_induced_path(cycle(7), 7)


def test_ecc_reference_examples():
    from fractions import Fraction

    half = Fraction(1, 2)
    assert ecc_reference(cycle(9), 2, half, 2) == []
    tri = clique(3)
    assert ecc_reference(tri, 2, half, 1) == [frozenset({1, 2, 3})]
    # two stars joined through 2 low-degree vertices: distance 3 between the hubs
    edges = [(1, i) for i in range(3, 7)] + [(2, i) for i in range(7, 11)] + [(1, 11), (11, 12), (12, 2)]
    g = LabeledGraph(range(1, 13), edges)
    assert ecc_reference(g, 2, half, 2) == [frozenset({1}), frozenset({2})]
    assert compute_eccs(g, 2, half)[2] == [frozenset({1}), frozenset({2})]
