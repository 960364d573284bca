import itertools

import networkx as nx
import pytest

from locert.basic import acyclicity_scheme, centered_h_scheme, is_forest, kk_free_scheme
from locert.corpus import random_corpus
from locert.framework import measure_certificates, run_certification
from locert.graph import LabeledGraph
from locert.oracles import contains

from conftest import PAW, clique, cycle, from_nx, path, star


def test_acyclicity_examples():
    s = acyclicity_scheme()
    a = s.prove(path(3))
    assert [a.records[v][0] for v in (1, 2, 3)] == [0, 1, 2]
    forest = LabeledGraph([1, 2, 3, 4, 5], [(1, 2), (4, 5), (3, 4)])
    assert run_certification(forest, s).accepted


def test_triangle_all_labels_rejected():
    s = acyclicity_scheme()
    g = clique(3)
    for labels in itertools.product(range(5), repeat=3):
        assert not run_certification(g, s, {v: (x,) for v, x in zip(g.vertices, labels)}).accepted


def test_kk_free_examples(petersen):
    assert run_certification(from_nx(nx.complete_bipartite_graph(3, 3)), kk_free_scheme(3)).accepted
    v = run_certification(clique(4), kk_free_scheme(4))
    assert v.rejecting_vertices == frozenset(clique(4).vertices)
    assert run_certification(petersen, kk_free_scheme(3)).accepted
    with pytest.raises(ValueError):
        kk_free_scheme(2)


def test_kk_vector_is_n_bits():
    g = cycle(11)
    a = kk_free_scheme(3).prove(g)
    assert measure_certificates(a).per_field_max["vector"] == 3 + (2 * 4 - 1) + 11


def test_centered_examples():
    k13 = star(3)
    assert not run_certification(k13, centered_h_scheme(k13, 1, 1)).accepted
    assert run_certification(cycle(6), centered_h_scheme(k13, 1, 1)).accepted
    v = run_certification(path(5), centered_h_scheme(path(5), 3, 2))
    assert 3 in v.rejecting_vertices
    with pytest.raises(ValueError):
        centered_h_scheme(path(5), 1, 2)


@pytest.mark.parametrize("q", [3, 4])
def test_kk_free_matches_oracle(q):
    s = kk_free_scheme(q)
    for g in random_corpus(120, 12, seed=f"kk{q}", densities=(0.2, 0.4, 0.6)):
        assert run_certification(g, s).accepted == (not contains(g, clique(q), "subgraph"))


@pytest.mark.parametrize("h, w, d", [(star(3), 1, 1), (PAW, 3, 1), (path(5), 3, 2), (cycle(4), 1, 2)])
def test_centered_matches_oracle(h, w, d):
    s = centered_h_scheme(h, w, d)
    for g in random_corpus(60, 15, seed="ch", densities=(0.15, 0.3)):
        assert run_certification(g, s).accepted == (not contains(g, h, "induced"))


def test_forest_honest():
    for g in random_corpus(100, 10, seed="forest", densities=(0.1, 0.2)):
        if is_forest(g):
            assert run_certification(g, acyclicity_scheme()).accepted
