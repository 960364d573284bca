import math
from fractions import Fraction

import pytest

from locert.corpus import random_graph
from locert.framework import SchemeBugError, explain_rejections, fuzz_soundness, measure_certificates, run_certification, run_computation_scheme
from locert.graph import LabeledGraph
from locert.layers import compute_ecc_table, witnessed_graph
from locert.mapschemes import PIECES, TABLE, COMPONENTS, gu_scheme, is_component_bijection, renaming_scheme, spread_universal_scheme, tg_scheme
from locert.oracles import has_induced_path

from conftest import clique, cycle, path, two_hubs

HALF = Fraction(1, 2)


@pytest.mark.parametrize("eps", [HALF, Fraction(1, 3), "log"])
@pytest.mark.parametrize("seed", range(6))
def test_tg_gu_honest(eps, seed):
    g = random_graph(6 + 5 * seed, (0.05, 0.2, 0.5)[seed % 3], f"mt:{seed}")
    table = tuple(sorted(compute_ecc_table(g, 2, eps).items()))
    assert all(out == table for out in run_computation_scheme(g, tg_scheme(eps, 2)).values())
    outs = run_computation_scheme(g, gu_scheme(eps, 2))
    for u, out in outs.items():
        assert out == witnessed_graph(g, 2, eps, u).key()


def _replace_field(records, f, value):
    return {v: r[:f] + (value,) + r[f + 1 :] for v, r in records.items()}


def test_tg_merged_eccs_rejected():
    g = two_hubs(4)
    scheme = tg_scheme(HALF, 2)
    honest = scheme.prover(g)
    rec = next(iter(honest.values()))
    table = tuple((v, tuple((1, e[1]) if e is not None and e[0] == 2 else e for e in row)) for v, row in rec[TABLE])
    comps = tuple(c for c in rec[COMPONENTS] if not (c[0] == 2 and c[1] == 2))
    comps = tuple((i, cid, edges + ((1, 2, 302),)) if (i, cid) == (2, 1) else (i, cid, edges) for i, cid, edges in comps)
    forged = _replace_field(_replace_field(honest, TABLE, table), COMPONENTS, comps)
    assert not run_certification(g, scheme, forged).accepted


def test_tg_wrong_distance_rejected_at_leaf():
    g = two_hubs(4)
    scheme = tg_scheme(HALF, 2)
    honest = scheme.prover(g)
    rec = next(iter(honest.values()))
    table = tuple((v, (row[0], None) if v == 100 else row) for v, row in rec[TABLE])
    bad = explain_rejections(g, scheme, _replace_field(honest, TABLE, table))
    assert 100 in bad


def test_gu_flipped_piece_rejected():
    g = two_hubs(2)
    scheme = gu_scheme(HALF, 2)
    honest = scheme.prover(g)
    rec = honest[100]
    layer_pieces = list(rec[PIECES])
    idx, tokens = layer_pieces[0][0]
    tokens = tuple(t + 1 if j == len(tokens) - 1 else t for j, t in enumerate(tokens))
    layer_pieces[0] = ((idx, tokens),) + layer_pieces[0][1:]
    forged = dict(honest)
    forged[100] = rec[:PIECES] + (tuple(layer_pieces),)
    assert not run_certification(g, scheme, forged).accepted


def test_gu_all_low_reconstructs_everything():
    g = cycle(9)
    for out in run_computation_scheme(g, gu_scheme(HALF, 2)).values():
        assert out[0] == frozenset(g.vertices) and out[1] == g.edges


@pytest.mark.parametrize("strategy", ["bitflip", "splice"])
@pytest.mark.parametrize("make", [lambda: tg_scheme(HALF, 2), lambda: gu_scheme(HALF, 2)])
def test_computation_fuzz(strategy, make):
    g = random_graph(18, 0.2, "fz")
    rep = fuzz_soundness(g, make(), strategy, seed=3, budget=60)
    assert rep.trials == 60 and rep.ok, rep.violations[:1]


def test_fuzz_zero_budget():
    assert fuzz_soundness(path(4), tg_scheme(HALF, 2), "bitflip", budget=0).trials == 0


def test_tg_requires_k():
    with pytest.raises(ValueError):
        tg_scheme(HALF, 1)


def test_spread_universal():
    diam1 = lambda g: g.is_connected and all(len(g.adj[v]) == g.n - 1 for v in g.vertices)
    assert run_certification(clique(4), spread_universal_scheme(diam1)).accepted
    acyclic = lambda g: g.m == g.n - len(g.components)
    v = run_certification(cycle(6), spread_universal_scheme(acyclic))
    assert v.rejecting_vertices == frozenset(cycle(6).vertices)
    assert not run_certification(cycle(6), spread_universal_scheme(lambda g: not has_induced_path(g, 5))).accepted
    md = spread_universal_scheme(diam1, "min-degree", Fraction(1, 2))
    assert run_certification(clique(9), md).accepted


def test_renaming():
    g = LabeledGraph([10, 20, 30], [(10, 20), (20, 30)])
    assert run_computation_scheme(g, renaming_scheme()) == {10: 1, 20: 2, 30: 3}
    assert run_computation_scheme(LabeledGraph([7]), renaming_scheme()) == {7: 1}
    h = random_graph(30, 0.1, "ren")
    assert is_component_bijection(h, run_computation_scheme(h, renaming_scheme()))


def test_honest_rejection_is_a_bug():
    from locert.framework import Reject, Scheme

    def step(view, memo):
        raise Reject("no")

    s = Scheme("never", 1, ("x",), lambda g: {v: (0,) for v in g.vertices}, step, "computation", lambda g: {})
    with pytest.raises(SchemeBugError):
        run_computation_scheme(path(2), s)


def test_size_bounds_with_frozen_constants():
    sizes = (16, 32, 64, 128)
    for eps in (HALF, Fraction(1, 3)):
        tg = [measure_certificates(tg_scheme(eps, 2).prove(random_graph(n, 0.3, f"sz:{n}"))).max_bits for n in sizes]
        gu = [measure_certificates(gu_scheme(eps, 2).prove(random_graph(n, 0.3, f"sz:{n}"))).max_bits for n in sizes]
        m1 = [n / eps * math.log2(n) for n in sizes]
        m2 = [n ** (1 + float(eps)) / eps * math.log2(n) ** 2 for n in sizes]
        c1, c2 = tg[0] / m1[0], gu[0] / m2[0]
        assert all(b <= c1 * m for b, m in zip(tg, m1))
        assert all(b <= c2 * m for b, m in zip(gu, m2))
