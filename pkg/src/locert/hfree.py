"""Certification of H-freeness (induced or not) for any H on at most ``4k-1`` vertices.

A pointed graph ``(H', {h})`` is ``h`` plus a union of components of
``H - h``. The shared table records, for every vertex ``v`` near an ECC_2,
which pointed pieces embed with ``h`` at ``v`` and the rest strictly closer to
that ECC. Verifiers glue a piece seen locally to pieces promised by the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Mapping

from .codec import Bits
from .framework import Reject, Scheme
from .graph import LabeledGraph, RadiusView
from .layers import compute_ecc_table, layer_of_degree
from .mapschemes import WITNESS_FIELDS, check_witnessed, graph_of, prove_layered, prove_pieces
from .oracles import contains, find_induced_embedding, iter_embeddings
from .paths import TOP, Halos, _check_shared, _halos

HALF = Fraction(1, 2)
HTABLE_FIELDS = WITNESS_FIELDS + ("htable",)
HTABLE = 4


@dataclass(frozen=True)
class PointedGraph:
    """``graph`` is induced in H by ``pointed`` plus the chosen components of ``H - h``.

    Columns are keyed by ``(h, mask)`` where bit ``j`` of ``mask`` selects the
    ``j``-th component of ``H - h`` in order of minimum label.
    """

    graph: LabeledGraph
    pointed: frozenset[int]
    h: int
    mask: int

    @property
    def key(self) -> tuple[int, int]:
        return self.h, self.mask


def _components_without(hg: LabeledGraph, h: int) -> list[frozenset[int]]:
    rest = hg.induced_subgraph(x for x in hg.vertices if x != h)
    return sorted((frozenset(c) for c in rest.components), key=min)


def enumerate_pointed_graphs(hg: LabeledGraph, k: int | None = None) -> list[PointedGraph]:
    """Every ``(H', {h})``; with ``k`` given, ``H`` may have at most ``4k-1`` vertices."""
    if k is not None and hg.n > 4 * k - 1:
        raise ValueError(f"H has {hg.n} vertices, at most {4 * k - 1} allowed for k={k}")
    out = []
    for h in sorted(hg.vertices):
        comps = _components_without(hg, h)
        for mask in range(1 << len(comps)):
            keep = {h}.union(*(c for j, c in enumerate(comps) if mask >> j & 1))
            out.append(PointedGraph(hg.induced_subgraph(keep), frozenset({h}), h, mask))
    return out


def complement_in(hg: LabeledGraph, p: PointedGraph) -> PointedGraph:
    """``H[(V(H) - V(H')) + pointed]`` with the same pointed set."""
    keep = (set(hg.vertices) - set(p.graph.vertices)) | set(p.pointed)
    comps = _components_without(hg, p.h)
    mask = ((1 << len(comps)) - 1) & ~p.mask
    return PointedGraph(hg.induced_subgraph(keep), p.pointed, p.h, mask)


# ---------------------------------------------------------------- the table


def _entry(g: LabeledGraph, piece: PointedGraph, v: int, halos: Halos, mode: str) -> bool:
    cid, d = halos.entry(v)
    closer = halos.closer(cid, d)
    return find_induced_embedding(g, piece.graph, mode, pinned={piece.h: v}, allowed=closer | {v}) is not None


def _row(g: LabeledGraph, pieces: list[PointedGraph], v: int, halos: Halos, mode: str) -> Bits:
    return Bits("".join("1" if _entry(g, p, v, halos, mode) else "0" for p in pieces))


def h_table(g: LabeledGraph, k: int, hg: LabeledGraph, mode: str = "induced") -> dict[int, Bits]:
    """Rows for every vertex within ``k-1`` of V_2; columns in pointed-graph order."""
    if mode not in ("induced", "subgraph"):
        raise ValueError(f"unknown mode {mode!r}")
    pieces = enumerate_pointed_graphs(hg)
    halos = Halos(compute_ecc_table(g, k, HALF), TOP)
    return {v: _row(g, pieces, v, halos, mode) for v in sorted(g.vertices) if halos.entry(v) is not None}


# ---------------------------------------------------------------- verification


def _table_globals(table: Any, glob, width: int, memo: dict) -> dict[int, Bits]:
    key = ("htable", table, glob.table, width)
    hit = memo.get(key)
    if hit is None:
        hit = _decode_table(table, glob, width)
        memo[key] = hit
    if isinstance(hit, Reject):
        raise Reject(hit.reason)
    return hit


def _decode_table(table: Any, glob, width: int) -> dict[int, Bits] | Reject:
    if type(table) is not tuple:
        return Reject("htable-format")
    out = {}
    last = 0
    for item in table:
        if type(item) is not tuple or len(item) != 2 or type(item[0]) is not int or item[0] <= last:
            return Reject("htable-format")
        v, bits = item
        if not isinstance(bits, Bits) or len(bits) != width:
            return Reject("htable-format")
        out[v] = bits
        last = v
    want = {v for v, row in glob.rows.items() if row[TOP - 1] is not None}
    if set(out) != want:
        return Reject("htable-domain")
    return out


def h_free_scheme(hg: LabeledGraph, k: int, mode: str = "induced", seed: int | str = 0) -> Scheme:
    """Certify that no (induced when ``mode='induced'``) copy of ``hg`` exists, at radius ``k``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if mode not in ("induced", "subgraph"):
        raise ValueError(f"unknown mode {mode!r}")
    pieces = enumerate_pointed_graphs(hg, k)
    index = {p.key: j for j, p in enumerate(pieces)}
    width = len(pieces)
    hv = frozenset(hg.vertices)
    comps = {h: _components_without(hg, h) for h in hv}

    def prover(g: LabeledGraph) -> dict[int, tuple]:
        shared = prove_layered(g, k, HALF)
        spread = prove_pieces(g, HALF, seed)
        table = tuple(sorted(h_table(g, k, hg, mode).items()))
        return {v: shared + (spread[v], table) for v in g.vertices}

    def verify_rows(gu: LabeledGraph, wset, edges, halos: Halos, cid: int, table: Mapping[int, Bits], memo: dict) -> None:
        key = ("htable-rows", wset, edges, cid)
        want = memo.get(key)
        if want is None:
            want = {v: _row(gu, pieces, v, halos, mode) for ring in halos.by.get(cid, {}).values() for v in ring}
            memo[key] = want
        for v, bits in want.items():
            if table.get(v) != bits:
                raise Reject("htable-value")

    def visible_copy(gu: LabeledGraph, wset, edges, halos: Halos, memo: dict) -> bool:
        key = ("visible-h", wset, edges)
        hit = memo.get(key)
        if hit is None:
            labels = {x: halos.entry(x)[0] for x in gu.vertices if x not in wset}
            hit = memo[key] = next(iter_embeddings(gu, hg, mode, labels=labels), None) is not None
        return hit

    def one_glue(gu, wset, edges, halos: Halos, cu: int, table, memo: dict) -> None:
        home = halos.ring(cu, 0)
        for cid, rings in sorted(halos.by.items()):
            if cid == cu:
                continue
            for d, ring in sorted(rings.items()):
                if d == 0:
                    continue
                base = wset - halos.ball(cid, d)
                for v in sorted(ring & wset):
                    bits = table[v]
                    key = ("h-one", wset, edges, cu, v, bits)
                    hit = memo.get(key)
                    if hit is None:
                        hit = ()
                        for p in pieces:
                            end = index[(p.h, ((1 << len(comps[p.h])) - 1) & ~p.mask)]
                            if bits[end] != "1":
                                continue
                            emb = find_induced_embedding(gu, p.graph, mode, pinned={p.h: v}, allowed=base | {v}, touch=home)
                            if emb is not None:
                                hit = ("one", emb, ((p.h, v, end),))
                                break
                        memo[key] = hit
                    if hit:
                        raise Reject("glue-one", hit)

    def two_glue(gu, wset, edges, halos: Halos, cu: int, table, memo: dict) -> None:
        home = halos.ring(cu, 0)
        ends = []
        for cid, rings in halos.by.items():
            if cid != cu:
                for d, ring in rings.items():
                    if d > 0:
                        ends.extend((v, cid, d) for v in ring & wset)
        if len({c for _, c, _ in ends}) < 2:
            return
        ends.sort()
        for a in range(len(ends)):
            v1, c1, d1 = ends[a]
            for b in range(a + 1, len(ends)):
                v2, c2, d2 = ends[b]
                if c1 == c2:
                    continue
                key = ("h-two", wset, edges, cu, v1, v2, table[v1], table[v2])
                hit = memo.get(key)
                if hit is None:
                    base = wset - halos.ball(c1, d1) - halos.ball(c2, d2)
                    hit = memo[key] = _two_glue_pair(gu, hg, pieces, table[v1], table[v2], v1, v2, base, home, mode) or ()
                if hit:
                    raise Reject("glue-two", hit)

    def step(view: RadiusView, memo: dict) -> bool:
        u = view.center
        glob, wset, edges = check_witnessed(view, k, HALF, memo)
        table = _table_globals(_check_shared(view, HTABLE), glob, width, memo)
        halos = _halos(glob.rows, glob.table, TOP, memo)
        gu = graph_of(wset, edges, memo)
        cu = None
        if layer_of_degree(len(view.adj[u]), glob.n, HALF) == TOP:
            cu = halos.entry(u)[0]
            verify_rows(gu, wset, edges, halos, cu, table, memo)
        if visible_copy(gu, wset, edges, halos, memo):
            raise Reject("visible-copy")
        if cu is not None:
            one_glue(gu, wset, edges, halos, cu, table, memo)
            two_glue(gu, wset, edges, halos, cu, table, memo)
        return True

    return Scheme(
        f"h_free(k={k},mode={mode},|H|={hg.n})", k, HTABLE_FIELDS, prover, step, "decision",
        predicate=lambda g: not contains(g, hg, mode), params={"k": k, "mode": mode, "h": hg},
    )


def _two_glue_pair(gu, hg, pieces, bits1: Bits, bits2: Bits, v1: int, v2: int, base: frozenset[int], home: frozenset[int], mode: str) -> tuple | None:
    """A start piece in ``base`` completing two table pieces hung at ``v1`` and ``v2``."""
    ones1 = [(j, p) for j, p in enumerate(pieces) if bits1[j] == "1"]
    ones2 = [(j, p) for j, p in enumerate(pieces) if bits2[j] == "1"]
    allowed = base | {v1, v2}
    for (j1, p1), (j2, p2) in product(ones1, ones2):
        if p1.h == p2.h:
            continue
        s1, s2 = set(p1.graph.vertices), set(p2.graph.vertices)
        if s1 & s2:
            continue
        keep = (set(hg.vertices) - s1 - s2) | {p1.h, p2.h}
        start = hg.induced_subgraph(keep)
        emb = find_induced_embedding(gu, start, mode, pinned={p1.h: v1, p2.h: v2}, allowed=allowed, touch=home)
        if emb is not None:
            return ("two", emb, ((p1.h, v1, j1), (p2.h, v2, j2)))
    return None


def extract_copy(g: LabeledGraph, k: int, hg: LabeledGraph, mode: str, witness: tuple) -> dict[int, int] | None:
    """Complete a glue witness into a full map ``V(H) -> V(G)`` using the whole graph.

    The start piece comes from the witness; every promised end piece is
    re-embedded with the same constraints the table entry was computed under.
    Returns ``None`` when some end piece cannot be re-embedded.
    """
    _, start, ends = witness
    pieces = enumerate_pointed_graphs(hg)
    halos = Halos(compute_ecc_table(g, k, HALF), TOP)
    full = dict(start)
    for h, v, j in ends:
        cid, d = halos.entry(v)
        emb = find_induced_embedding(g, pieces[j].graph, mode, pinned={h: v}, allowed=halos.closer(cid, d) | {v})
        if emb is None:
            return None
        full.update(emb)
    return full
