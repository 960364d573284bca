from collections import Counter

import pytest

from locert.corpus import blob_corpus, random_corpus, skirt_instance
from locert.framework import explain_rejections, fuzz_soundness, run_certification
from locert.graph import LabeledGraph
from locert.layers import compute_ecc_table
from locert.oracles import PathConstraint, has_induced_path, is_induced_path, longest_induced_path
from locert.paths import (
    HALF,
    TOP,
    Halos,
    constrained_path_field,
    extract_witness,
    longest_paths_field,
    p3k_scheme,
    p4k_scheme,
    p143k_length,
    p143k_scheme,
)

from conftest import clique, cycle, path, two_blobs, two_hubs


def pendant_blob() -> LabeledGraph:
    # K_6 on 1..6 and a pendant 7 at vertex 1
    g = clique(6)
    return LabeledGraph(range(1, 8), g.edges + ((1, 7),))


def test_lp_pendant_on_clique():
    assert longest_paths_field(pendant_blob(), 2) == {7: 3}


def test_lp_empty_without_top_layer():
    assert longest_paths_field(cycle(9), 2) == {}


def test_lp_distance_one_at_least_two():
    for g in blob_corpus(10, 2, 30, seed="lp"):
        rows = compute_ecc_table(g, 2, HALF)
        for v, c in longest_paths_field(g, 2).items():
            assert rows[v][TOP - 1][1] == 1 and c >= 2


def test_lp_matches_fresh_oracle():
    for g in blob_corpus(10, 3, 30, seed="fresh"):
        halos = Halos(compute_ecc_table(g, 3, HALF), TOP)
        for v, c in longest_paths_field(g, 3).items():
            e = halos.entry(v)
            assert c == longest_induced_path(g, PathConstraint(start=v, allowed=halos.closer(*e) | {v})).count


def test_lp_cap_saturates():
    g = pendant_blob()
    assert longest_paths_field(g, 2, cap=2) == {7: 2}


def test_m_pathcheck_examples():
    s = p4k_scheme(2)
    assert not run_certification(path(7), s).accepted
    assert explain_rejections(path(7), s)[4].reason == "visible-path"
    assert run_certification(cycle(7), s).accepted
    assert run_certification(LabeledGraph(), s).accepted


def test_glue_at_blob():
    g = two_blobs(3)
    assert has_induced_path(g, 7)
    reasons = explain_rejections(g, p4k_scheme(2))
    assert any(r.reason == "glue-one" and v <= 16 for v, r in reasons.items())
    assert run_certification(two_blobs(2), p4k_scheme(2)).accepted == (not has_induced_path(two_blobs(2), 7))


@pytest.mark.parametrize("eps", [HALF, "log"])
def test_p3k_examples(eps):
    s = p3k_scheme(2, eps)
    assert not run_certification(path(5), s).accepted
    assert run_certification(cycle(5), s).accepted


def test_p143k_examples():
    assert p143k_length(3) == 13
    s = p143k_scheme(3)
    assert run_certification(cycle(13), s).accepted
    assert not run_certification(path(13), s).accepted


@pytest.mark.parametrize("case, seed", [("a", 0), ("b", 12), ("c", 2), ("d", 10)])
def test_two_ecc_cases_fire(case, seed):
    g = skirt_instance(seed)
    reasons = {r.reason for r in explain_rejections(g, p143k_scheme(3, cases=case)).values()}
    assert "glue-" + case in reasons
    assert has_induced_path(g, 13)


def test_constrained_owner_rules():
    g = skirt_instance(0)
    rows = compute_ecc_table(g, 3, HALF)
    field = constrained_path_field(g, 3)
    for v, table in field.items():
        e = rows[v][TOP - 1]
        if e is None or e[1] == 0:
            assert table is None
        else:
            assert table is not None


def test_constrained_column_three_in_clique():
    # v=7 and v'=8 hang off distinct vertices of a clique: 7-1-2-8 is induced
    g = LabeledGraph(range(1, 9), clique(6).edges + ((1, 7), (2, 8)))
    table = dict((r[0], r) for r in constrained_path_field(g, 2)[7])
    assert table[8][3] == 4


def test_constrained_absent_column():
    # hubs 1 and 2 share an ECC only through the low vertex 300, which is outside Q for ring vertices
    table = dict((r[0], r) for r in constrained_path_field(two_hubs(1), 2)[100])
    assert table[200] == (200, 2, 2, None, 4)
    assert table[101][3] == 3


SCHEMES = [
    ("p4k", lambda: p4k_scheme(2), 2, HALF, 7),
    ("p3k", lambda: p3k_scheme(2), 2, HALF, 5),
    ("p3k-log", lambda: p3k_scheme(2, "log"), 2, "log", 5),
]

WITH_DEEP = SCHEMES + [("p143k", lambda: p143k_scheme(3), 3, HALF, 13)]


@pytest.mark.parametrize("name, make, k, eps, m", SCHEMES, ids=[s[0] for s in SCHEMES])
def test_honest_matches_oracle(name, make, k, eps, m):
    s = make()
    for g in random_corpus(60, 20, seed=f"unit-{name}") + blob_corpus(12, 2, 30, seed=f"unit-{name}"):
        assert run_certification(g, s).accepted == (not has_induced_path(g, m))


@pytest.mark.parametrize("name, make, k, eps, m", WITH_DEEP, ids=[s[0] for s in WITH_DEEP])
def test_glue_witnesses_are_long_induced_paths(name, make, k, eps, m):
    s = make()
    graphs = [skirt_instance(i) for i in range(12)] if name == "p143k" else blob_corpus(15, 2, 30, seed="wit")
    kinds = Counter()
    for g in graphs:
        for r in explain_rejections(g, s).values():
            if r.witness is not None:
                p = extract_witness(g, k, eps, r.witness)
                kinds[r.witness[0]] += 1
                assert is_induced_path(g, p) and len(p) >= m
    assert sum(kinds.values()) > 0


@pytest.mark.parametrize("strategy", ["bitflip", "splice", "relabel"])
def test_fuzz_p4k(strategy):
    g = path(7)
    rep = fuzz_soundness(g, p4k_scheme(2), strategy, seed=7, budget=100)
    assert rep.trials == 100 and rep.ok


def test_requires_k():
    for make in (p4k_scheme, p3k_scheme, p143k_scheme):
        with pytest.raises(ValueError):
            make(1)
