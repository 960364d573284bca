import random
from itertools import combinations

import pytest

from locert.gadgets import (
    GadgetShapeError,
    PairFamily,
    bipartite_encoder,
    build_gadget,
    choose_spine,
    embedding_profile,
    find_copies,
    fooling_bound,
    fooling_table,
    hybrid_view_experiment,
    path_tree,
    proposition_check,
    random_family,
)
from locert.graph import LabeledGraph
from locert.paths import p4k_scheme

from conftest import path, star

ONE_TWO = PairFamily(3, [(1, 2)])
TWO_THREE = PairFamily(3, [(2, 3)])


def caterpillar() -> LabeledGraph:
    # spine 1..11 with one leaf on each inner spine vertex, so no vertex has degree two
    edges = [(i, i + 1) for i in range(1, 11)] + [(i, 100 + i) for i in range(2, 11)]
    return LabeledGraph(list(range(1, 12)) + [100 + i for i in range(2, 11)], edges)


def test_pair_family():
    assert PairFamily(3, [(2, 1)]).pairs == {(1, 2)}
    assert ONE_TWO.complement().pairs == {(1, 3), (2, 3)}
    assert not ONE_TWO.intersects(TWO_THREE)
    for bad in ([(1, 1)], [(0, 2)], [(1, 4)]):
        with pytest.raises(ValueError):
            PairFamily(3, bad)


def test_encoder_examples():
    n = 3
    full = {(i, n + j) for i in range(1, n + 1) for j in range(1, n + 1)}
    assert set(bipartite_encoder(PairFamily(n)).edges) == full
    everything = PairFamily(n, combinations(range(1, n + 1), 2))
    assert set(bipartite_encoder(everything).edges) == {(i, n + i) for i in range(1, n + 1)}
    assert set(bipartite_encoder(ONE_TWO).edges) == full - {(1, 5), (2, 4)}


def test_path_gadget_shape():
    inst = build_gadget(2, 3, path_tree(2), ONE_TWO, ONE_TWO)
    g = inst.graph
    assert g.n == 27
    assert inst.spine == tuple(range(2, 11))
    v0, v1 = inst.extras[1], inst.extras[11]
    assert set(g.adj[v0]) == set(inst.clique(0, 1))
    assert set(g.adj[v1]) == set(inst.clique(1, 1))
    assert set(g.adj[inst.w]) == set(inst.clique(0, 4)) | set(inst.clique(1, 4))
    for s in (0, 1):
        for j in range(1, 5):
            c = inst.clique(s, j)
            assert all(g.has_edge(x, y) for x, y in combinations(c, 2))
            assert [inst.locate(v) for v in c] == [(s, j, i) for i in range(1, 4)]
    # inner levels are joined straight across, consecutive levels by antimatchings
    for j in (2, 3):
        for i in range(1, 4):
            assert g.has_edge(inst.clique_index[(0, j, i)], inst.clique_index[(1, j, i)])
    across = sum(g.has_edge(x, y) for x in inst.clique(0, 1) for y in inst.clique(0, 2))
    assert across == 3 * 3 - 3


def test_mapping_text_lists_every_vertex():
    inst = build_gadget(2, 3, path_tree(2), ONE_TWO, ONE_TWO)
    lines = inst.mapping_text().splitlines()
    assert len(lines) == inst.graph.n


def test_containment_matches_intersection():
    t = path_tree(2)
    assert proposition_check(2, 3, t, ONE_TWO, ONE_TWO) == (True, True)
    assert proposition_check(2, 3, t, ONE_TWO, TWO_THREE) == (False, False)
    assert proposition_check(2, 3, t, PairFamily(3), PairFamily(3)) == (False, False)


def test_embeddings_use_two_vertices_per_clique():
    t = path_tree(2)
    for s in range(12):
        rng = random.Random(s)
        n = 3 + s % 2
        a, b = random_family(n, rng), random_family(n, rng)
        inst = build_gadget(2, n, t, a, b)
        embs = find_copies(inst, t, limit=None)
        assert bool(embs) == a.intersects(b)
        for e in embs:
            p = embedding_profile(inst, e)
            assert p.clique_vertices == 8
            assert p.outside == {inst.extras[1], inst.extras[11], inst.w}
            assert max(p.per_clique.values()) <= 2
            assert not p.antimatched_doubles()


def test_tree_gadget():
    t = caterpillar()
    assert choose_spine(t, 2) == tuple(range(2, 11))
    inst = build_gadget(2, 3, t, ONE_TWO, ONE_TWO)
    assert inst.graph.n == 4 * 2 * 2 + t.n
    assert proposition_check(2, 3, t, ONE_TWO, ONE_TWO, cap=24) == (True, True)
    assert proposition_check(2, 3, t, ONE_TWO, TWO_THREE, cap=24) == (False, False)


@pytest.mark.parametrize(
    "t",
    [
        path_tree(1),
        LabeledGraph(range(1, 12), [(i, i + 1) for i in range(1, 11)] + [(1, 11)]),
        star(12),
        LabeledGraph(range(1, 12), [(i, i + 1) for i in range(1, 10)] + [(2, 11)]),
    ],
    ids=["short-path", "cycle", "shallow", "degree-two"],
)
def test_shape_errors(t):
    with pytest.raises(GadgetShapeError):
        build_gadget(2, 3, t, ONE_TWO, ONE_TWO)


def test_longer_path_accepted():
    assert build_gadget(2, 3, path(13), ONE_TWO, ONE_TWO).graph.n == 16 + 13


def test_bad_arguments():
    with pytest.raises(ValueError):
        build_gadget(2, 1, path_tree(2), PairFamily(1), PairFamily(1))
    with pytest.raises(ValueError):
        build_gadget(2, 3, path_tree(2), PairFamily(4), ONE_TWO)


def test_hybrid_views_match():
    for s in range(10):
        rng = random.Random(s)
        a, b = random_family(3, rng), random_family(3, rng)
        assert hybrid_view_experiment(2, 3, a, b, seed=s)
    assert hybrid_view_experiment(2, 3, ONE_TWO, ONE_TWO)


def test_hybrid_with_honest_certificates():
    assert hybrid_view_experiment(2, 3, ONE_TWO, TWO_THREE, scheme=p4k_scheme(2))


def test_hybrid_shuffled_control_fails():
    assert not hybrid_view_experiment(2, 3, ONE_TWO, TWO_THREE, shuffle=True)


def test_fooling_examples():
    assert fooling_bound(8, 2, 11) == 1
    assert fooling_bound(1000, 2, 11) == 63
    ratios = [r for _, _, r in fooling_table([100, 1000, 10000], 2, 11)]
    assert abs(ratios[-1] - 1 / 16) < 1e-3
    assert abs(ratios[-1] - ratios[-2]) < abs(ratios[-2] - ratios[-3]) + 1e-9
    with pytest.raises(ValueError):
        fooling_bound(0, 2, 11)
