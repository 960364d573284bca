"""Certification of induced-path freeness on top of the layered map.

Three schemes share the certificate core ``tree, table, components, pieces``
and add path-length tables toward each extended connected component (ECC):

* ``p4k_scheme(k)``: no induced path on ``4k-1`` vertices, ``eps = 1/2``.
* ``p3k_scheme(k, eps)``: no induced path on ``3k-1`` vertices, any layering.
* ``p143k_scheme(k)``: no induced path on ``ceil(14k/3)-1`` vertices.

All counts are vertex counts. Every glue threshold reads "the union of the
glued induced paths has at least ``m`` vertices", shared endpoints counted once.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

from .framework import Reject, Scheme
from .graph import LabeledGraph, RadiusView, norm_edge
from .layers import Eps, compute_ecc_table, layer_of_degree
from .mapschemes import (
    WITNESS_FIELDS,
    Layered,
    check_witnessed,
    graph_of,
    prove_layered,
    prove_pieces,
    reconstruct_witnessed,
)
from .oracles import PathConstraint, PathResult, has_induced_path, iter_embeddings, longest_induced_path

HALF = Fraction(1, 2)
PATH_FIELDS = WITNESS_FIELDS + ("longest",)
CONSTRAINED_FIELDS = PATH_FIELDS + ("constrained",)
LONGEST = 4
CONSTRAINED = 5
# layer index of V_2 / ECC_2 in the two-layer setting
TOP = 2


def path_graph(m: int) -> LabeledGraph:
    return LabeledGraph(range(1, m + 1), ((i, i + 1) for i in range(1, m)))


def _longest(g: LabeledGraph, **kw: Any) -> PathResult:
    if kw.get("allowed") is not None:
        kw["allowed"] = frozenset(kw["allowed"])
    return longest_induced_path(g, PathConstraint(**kw))


# ---------------------------------------------------------------- halos


class Halos:
    """Vertices grouped by ECC_i and distance, read off the ECC table."""

    def __init__(self, rows: Mapping[int, tuple], i: int) -> None:
        self.i = i
        self.rows = rows
        self.by: dict[int, dict[int, set[int]]] = {}
        for v, row in rows.items():
            e = row[i - 1] if len(row) >= i else None
            if e is not None:
                self.by.setdefault(e[0], {}).setdefault(e[1], set()).add(v)

    def entry(self, v: int) -> tuple[int, int] | None:
        row = self.rows.get(v)
        return row[self.i - 1] if row is not None and len(row) >= self.i else None

    def ring(self, cid: int, d: int) -> frozenset[int]:
        return frozenset(self.by.get(cid, {}).get(d, ()))

    def closer(self, cid: int, d: int) -> frozenset[int]:
        """Vertices at distance less than ``d`` from the ECC ``cid``, the ECC included."""
        rings = self.by.get(cid, {})
        return frozenset().union(*(s for dd, s in rings.items() if dd < d))

    def ball(self, cid: int, d: int) -> frozenset[int]:
        return self.closer(cid, d + 1)


def _halos(glob_rows: Mapping[int, tuple], table_key: Any, i: int, memo: dict) -> Halos:
    key = ("halos", table_key, i)
    h = memo.get(key)
    if h is None:
        h = memo[key] = Halos(glob_rows, i)
    return h


# ---------------------------------------------------------------- provers


def lp_entry(g: LabeledGraph, halos: Halos, v: int, cap: int | None = None) -> int | None:
    """Vertex count of the longest induced path from ``v`` moving strictly closer to its ECC.

    With ``cap`` the count is truncated at ``cap``: every glue threshold
    saturates there, and the search may stop at the first such path.
    """
    e = halos.entry(v)
    if e is None or e[1] == 0:
        return None
    return _capped(_longest(g, start=v, allowed=halos.closer(*e) | {v}, target=cap).count, cap)


def _capped(count: int, cap: int | None) -> int:
    return count if cap is None else min(count, cap)


def longest_paths_field(g: LabeledGraph, k: int, levels: str | Eps = "single", cap: int | None = None) -> dict[int, Any]:
    """``single``: ``{v: count}`` toward ECC_2 with ``eps = 1/2``.

    Otherwise ``levels`` is the layering ``eps`` and the result maps each
    vertex with some defined entry to a per-layer tuple of counts or ``None``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if levels == "single":
        rows = compute_ecc_table(g, k, HALF)
        halos = Halos(rows, TOP)
        out = {}
        for v in g.vertices:
            c = lp_entry(g, halos, v, cap)
            if c is not None:
                out[v] = c
        return out
    rows = compute_ecc_table(g, k, levels)
    count = len(next(iter(rows.values()))) if rows else 0
    all_halos = [Halos(rows, i) for i in range(1, count + 1)]
    out = {}
    for v in g.vertices:
        row = tuple(lp_entry(g, h, v, cap) for h in all_halos)
        if any(x is not None for x in row):
            out[v] = row
    return out


def encode_field(field: Mapping[int, Any]) -> tuple:
    return tuple(sorted(field.items()))


def constrained_rows(g: LabeledGraph, v: int, q: frozenset[int], ring: frozenset[int]) -> tuple:
    """Rows ``(v', c1, c2, c3, c4)`` for ``v' in ring - {v}``; absent columns are ``None``."""
    out = []
    nv = set(g.adj[v]) | {v} if v in g else {v}
    for w in sorted(ring - {v}):
        c1 = _longest(g, start=v, allowed=q | {v, w}).count
        c2 = _longest(g, start=w, allowed=(q - nv) | {w}).count
        c3 = _longest(g, start=v, end=w, allowed=q | {v, w}).count
        c4 = _longest(g, start=v, two_path_partner=w, allowed=q | {v, w}).count
        out.append((w, c1, c2, c3 or None, c4 or None))
    return tuple(out)


def constrained_path_field(g: LabeledGraph, k: int) -> dict[int, tuple | None]:
    """Per-vertex table toward ECC_2 (``eps = 1/2``); ``None`` off the halos and on V_2."""
    if k < 2:
        raise ValueError("k must be at least 2")
    rows = compute_ecc_table(g, k, HALF)
    halos = Halos(rows, TOP)
    out: dict[int, tuple | None] = {}
    for v in g.vertices:
        e = halos.entry(v)
        if e is None or e[1] == 0:
            out[v] = None
        else:
            out[v] = constrained_rows(g, v, halos.closer(*e), halos.ring(*e))
    return out


def _prover(k: int, eps: Eps, seed: int | str, levels: str | Eps, constrained: bool, cap: int):
    def prover(g: LabeledGraph) -> dict[int, tuple]:
        shared = prove_layered(g, k, eps)
        pieces = prove_pieces(g, eps, seed)
        lp = encode_field(longest_paths_field(g, k, levels, cap))
        cp = constrained_path_field(g, k) if constrained else {}
        out = {}
        for v in g.vertices:
            rec = shared + (pieces[v], lp)
            if constrained:
                rec += (cp[v],)
            out[v] = rec
        return out

    return prover


# ---------------------------------------------------------------- verification helpers


def _lp_globals(lp: Any, glob: Layered, k: int, multi: bool, memo: dict) -> dict[int, Any]:
    key = ("lp", lp, glob.table, multi)
    hit = memo.get(key)
    if hit is None:
        try:
            hit = _decode_lp(lp, glob, multi)
        except Reject as r:
            hit = r
        memo[key] = hit
    if isinstance(hit, Reject):
        raise Reject(hit.reason)
    return hit


def _decode_lp(lp: Any, glob: Layered, multi: bool) -> dict[int, Any]:
    if type(lp) is not tuple:
        raise Reject("lp-format")
    out: dict[int, Any] = {}
    last = 0
    for item in lp:
        if type(item) is not tuple or len(item) != 2 or type(item[0]) is not int or item[0] <= last:
            raise Reject("lp-format")
        v, val = item
        if v not in glob.rows:
            raise Reject("lp-format")
        if multi:
            if type(val) is not tuple or len(val) != glob.count:
                raise Reject("lp-format")
            if any(x is not None and (type(x) is not int or x < 1) for x in val):
                raise Reject("lp-format")
        elif type(val) is not int or val < 1:
            raise Reject("lp-format")
        out[v] = val
        last = v
    for v, row in glob.rows.items():
        if multi:
            want = tuple(e is not None and e[1] > 0 for e in row)
            got = out.get(v, (None,) * glob.count)
            if not any(want):
                if v in out:
                    raise Reject("lp-domain")
            elif tuple(x is not None for x in got) != want:
                raise Reject("lp-domain")
        else:
            e = row[TOP - 1] if len(row) >= TOP else None
            if (e is not None and e[1] > 0) != (v in out):
                raise Reject("lp-domain")
    return out


def _check_shared(view: RadiusView, f: int) -> Any:
    mine = view.cert(view.center)[f]
    for w in view.adj[view.center]:
        other = view.cert(w)[f]
        if other is not mine and other != mine:
            raise Reject("lp-neighbor")
    return mine


def _lp_at(lp: Mapping[int, Any], v: int, i: int | None) -> int:
    """Contribution-ready count: ``1`` for ECC members and undefined entries."""
    val = lp.get(v)
    if val is None:
        return 1
    if i is None:
        return val
    x = val[i - 1]
    return 1 if x is None else x


def _induced_on(edges: tuple, verts: frozenset[int]) -> LabeledGraph:
    return LabeledGraph(verts, (e for e in edges if e[0] in verts and e[1] in verts))


def _verify_halo(view, glob, lp, k, wset, edges, halos: Halos, cid: int, multi: bool, memo: dict, cap: int) -> None:
    """Recompute the entries of every vertex at distance 1..k-1 from the ECC ``cid``."""
    key = ("lp-halo", wset, edges, halos.i, cid, cap)
    expected = memo.get(key)
    if expected is None:
        expected = {}
        for d in range(1, k):
            for v in halos.ring(cid, d):
                allowed = halos.closer(cid, d) | {v}
                outside = allowed - wset
                if len(outside) > 1:
                    # some edge inside the halo is not witnessed here
                    continue
                sub = _induced_on(edges, allowed)
                expected[v] = _capped(_longest(sub, start=v, target=cap).count, cap)
        memo[key] = expected
    i = halos.i if multi else None
    for v, c in expected.items():
        val = lp.get(v)
        got = None if val is None else (val if i is None else val[i - 1])
        if got != c:
            raise Reject("lp-value")


def _labelled_path(gu: LabeledGraph, wset: frozenset[int], halos: Halos, m: int, memo: dict, edges: tuple) -> tuple | None:
    """Induced ``m``-path of ``G_{<=u}`` whose unwitnessed vertices lie in distinct ECCs."""
    key = ("visible-path", wset, edges, m)
    if key in memo:
        return memo[key]
    labels = {}
    for x in gu.vertices:
        if x not in wset:
            e = halos.entry(x)
            labels[x] = e[0] if e is not None else ("?", x)
    found = None
    for emb in iter_embeddings(gu, path_graph(m), "induced", labels=labels):
        found = tuple(emb[j] for j in range(1, m + 1))
        break
    memo[key] = found
    return found


def _pstart_check(gu, wset, edges, halos: Halos, lp, cu: int, m: int, memo: dict) -> None:
    """One-sided glue from ``V_{<=u}`` into the halo of another ECC_2."""
    home = halos.ring(cu, 0)
    for cid, rings in sorted(halos.by.items()):
        if cid == cu:
            continue
        for d in sorted(rings):
            if d == 0:
                continue
            ball = halos.ball(cid, d)
            base = wset - ball
            for v in sorted(rings[d] & wset):
                need = max(1, m + 1 - _lp_at(lp, v, None))
                key = ("pstart", wset, edges, cu, v, need)
                hit = memo.get(key)
                if hit is None:
                    r = _longest(gu, start=v, allowed=base | {v}, touch=(home,), target=need)
                    hit = memo[key] = r.path if r.count >= need else ()
                if hit:
                    raise Reject("glue-one", ("one", hit, v, TOP))


def _three_ecc_check(gu, wset, edges, halos: Halos, lp, cu: int, m: int, memo: dict) -> None:
    """Path through ``C_u`` joining the halos of two further ECC_2s."""
    home = halos.ring(cu, 0)
    ends = []
    for cid, rings in halos.by.items():
        if cid == cu:
            continue
        for d, ring in rings.items():
            if d > 0:
                ends.extend((v, cid, d) for v in ring & wset)
    ends.sort()
    for a in range(len(ends)):
        v, cv, dv = ends[a]
        for b in range(a + 1, len(ends)):
            w, cw, dw = ends[b]
            if cw == cv:
                continue
            need = max(2, m + 2 - _lp_at(lp, v, None) - _lp_at(lp, w, None))
            key = ("three", wset, edges, cu, v, w, need)
            hit = memo.get(key)
            if hit is None:
                allowed = (wset - halos.ball(cv, dv) - halos.ball(cw, dw)) | {v, w}
                if len(allowed) < need:
                    hit = ()
                else:
                    r = _longest(gu, start=v, end=w, allowed=allowed, touch=(home,), target=need)
                    hit = r.path if r.count >= need else ()
                memo[key] = hit
            if hit:
                raise Reject("glue-three", ("two", hit, v, w, TOP))


# ---------------------------------------------------------------- m-pathcheck


def m_pathcheck(view: RadiusView, m: int, k: int, memo: dict) -> dict:
    """Steps (i)-(v) of the shared verifier with ``eps = 1/2``; returns context for later steps."""
    if m < 2 or k < 2:
        raise ValueError("m-pathcheck needs m >= 2 and k >= 2")
    u = view.center
    glob, wset, edges = check_witnessed(view, k, HALF, memo)
    lp = _lp_globals(_check_shared(view, LONGEST), glob, k, False, memo)
    halos = _halos(glob.rows, glob.table, TOP, memo)
    gu = graph_of(wset, edges, memo)
    lu = layer_of_degree(len(view.adj[u]), glob.n, HALF)
    cu = None
    if lu == TOP:
        cu = halos.entry(u)[0]
        _verify_halo(view, glob, lp, k, wset, edges, halos, cu, False, memo, m)
    path = _labelled_path(gu, wset, halos, m, memo, edges)
    if path is not None:
        raise Reject("visible-path", ("path", path))
    if cu is not None:
        _pstart_check(gu, wset, edges, halos, lp, cu, m, memo)
    return {"glob": glob, "wset": wset, "edges": edges, "lp": lp, "halos": halos, "gu": gu, "layer": lu, "cu": cu}


def p4k_scheme(k: int, seed: int | str = 0) -> Scheme:
    """Certify the absence of induced paths on ``4k-1`` vertices at radius ``k``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    m = 4 * k - 1

    def step(view: RadiusView, memo: dict) -> bool:
        m_pathcheck(view, m, k, memo)
        return True

    return Scheme(
        f"p4k(k={k})", k, PATH_FIELDS, _prover(k, HALF, seed, "single", False, m), step, "decision",
        predicate=lambda g: not has_induced_path(g, m), params={"k": k, "m": m},
    )


# ---------------------------------------------------------------- 3k - 1 with a multi-level table


def _view_graph(view: RadiusView) -> LabeledGraph:
    return LabeledGraph(view.dist, {norm_edge(x, y) for x, ys in view.adj.items() for y in ys})


def _two_sided_view_check(view: RadiusView, glob: Layered, lp, halos_by_layer: list[Halos], k: int, m: int) -> None:
    """Visible path between the halos of two ECC_i, glued at both ends."""
    vg = _view_graph(view)
    far = frozenset(x for x, d in view.dist.items() if d == k)
    for halos in halos_by_layer:
        i = halos.i
        present = []
        for x in view.dist:
            e = halos.entry(x)
            if e is not None:
                present.append((x, e[0], e[1]))
        present.sort()
        if len({c for _, c, _ in present}) < 2:
            continue
        for a in range(len(present)):
            v1, c1, d1 = present[a]
            b1 = halos.ball(c1, d1)
            for b in range(a + 1, len(present)):
                v2, c2, d2 = present[b]
                if c2 == c1:
                    continue
                need = max(2, m + 2 - _lp_at(lp, v1, i) - _lp_at(lp, v2, i))
                allowed = (frozenset(view.dist) - b1 - halos.ball(c2, d2)) | {v1, v2}
                if len(allowed) < need:
                    continue
                r = _longest(vg, start=v1, end=v2, allowed=allowed, special=far, special_budget=1, target=need)
                if r.count >= need:
                    raise Reject("glue-two", ("two", r.path, v1, v2, i))


def p3k_scheme(k: int, eps: Eps = HALF, seed: int | str = 0) -> Scheme:
    """Certify the absence of induced paths on ``3k-1`` vertices at radius ``k``.

    ``eps="log"`` selects the quasilinear layering with thresholds ``2^i``; the
    vertex count it depends on is certified by the spanning tree.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    m = 3 * k - 1

    def step(view: RadiusView, memo: dict) -> bool:
        u = view.center
        glob, wset, edges = check_witnessed(view, k, eps, memo)
        lp = _lp_globals(_check_shared(view, LONGEST), glob, k, True, memo)
        all_halos = [_halos(glob.rows, glob.table, i, memo) for i in range(1, glob.count + 1)]
        lu = layer_of_degree(len(view.adj[u]), glob.n, eps)
        for i in range(1, lu + 1):
            halos = all_halos[i - 1]
            _verify_halo(view, glob, lp, k, wset, edges, halos, halos.entry(u)[0], True, memo, m)
        key = ("inside-path", wset, edges, m)
        hit = memo.get(key)
        if hit is None:
            r = _longest(graph_of(wset, edges, memo), allowed=wset, target=m)
            hit = memo[key] = r.path if r.count >= m else ()
        if hit:
            raise Reject("visible-path", ("path", hit))
        _two_sided_view_check(view, glob, lp, all_halos, k, m)
        return True

    return Scheme(
        f"p3k(k={k},eps={eps})", k, PATH_FIELDS, _prover(k, eps, seed, eps, False, m), step, "decision",
        predicate=lambda g: not has_induced_path(g, m), params={"k": k, "m": m, "eps": eps},
    )


# ---------------------------------------------------------------- ceil(14k/3) - 1


def p143k_length(k: int) -> int:
    return -(-14 * k // 3) - 1


def _decode_constrained(table: Any) -> tuple:
    if type(table) is not tuple:
        raise Reject("constrained-format")
    for row in table:
        if type(row) is not tuple or len(row) != 5 or type(row[0]) is not int:
            raise Reject("constrained-format")
        if any(type(x) is not int or x < 1 for x in row[1:3]):
            raise Reject("constrained-format")
        if any(x is not None and (type(x) is not int or x < 1) for x in row[3:]):
            raise Reject("constrained-format")
    return table


def _anchor_graph(view: RadiusView, ctx: dict, k: int, memo: dict) -> tuple[frozenset[int], tuple, LabeledGraph]:
    """``G[C_u + V_1]`` read from the pieces around a closest ECC_2 vertex."""
    u = view.center
    cid, d = ctx["halos"].entry(u)
    anchor = min(x for x in ctx["halos"].ring(cid, 0) if view.dist.get(x) == d)
    wset, edges = reconstruct_witnessed(view, ctx["glob"], HALF, anchor, memo)
    return wset, edges, graph_of(wset, edges, memo)


def _check_own_table(view: RadiusView, ctx: dict, k: int, memo: dict) -> tuple | None:
    u = view.center
    table = view.cert(u)[CONSTRAINED]
    e = ctx["halos"].entry(u)
    if ctx["layer"] == TOP or e is None:
        if table is not None:
            raise Reject("constrained-owner")
        return None
    if table is None:
        raise Reject("constrained-owner")
    _decode_constrained(table)
    wset, edges, g1 = _anchor_graph(view, ctx, k, memo)
    halos = ctx["halos"]
    key = ("constrained", wset, edges, u)
    want = memo.get(key)
    if want is None:
        want = memo[key] = constrained_rows(g1, u, halos.closer(*e), halos.ring(*e))
    if table != want:
        raise Reject("constrained-value")
    return table


def _two_ecc_check(view: RadiusView, ctx: dict, k: int, m: int, memo: dict, cases: str) -> None:
    """Glue from ``G[C_u + V_1]`` into the halo of another ECC_2 using the owner's table."""
    u = view.center
    halos: Halos = ctx["halos"]
    cu = halos.entry(u)[0]
    wset, edges, g1 = _anchor_graph(view, ctx, k, memo)
    for v in sorted(view.dist):
        e = halos.entry(v)
        if e is None or e[0] == cu or e[1] == 0:
            continue
        table = _decode_constrained(view.cert(v)[CONSTRAINED])
        ball = halos.ball(*e)
        base = wset - ball
        for row in table:
            key = ("two-ecc", wset, edges, e, v, row, m, cases)
            hit = memo.get(key)
            if hit is None:
                hit = memo[key] = _two_ecc_cases(g1, base, v, row, m, cases)
            if hit:
                raise Reject("glue-" + hit[0], hit)


def _two_ecc_cases(g1: LabeledGraph, base: frozenset[int], v: int, row: tuple, m: int, cases: str = "abcd") -> tuple:
    w, c1, c2, c3, c4 = row
    if v not in g1 or w not in g1:
        return ()
    if "a" in cases:
        nw = set(g1.adj[w]) | {w}
        need = max(1, m + 1 - c1)
        r = _longest(g1, start=v, allowed=(base - nw) | {v}, target=need)
        if r.count >= need:
            return ("a", r.path, v, w)
    if "b" in cases:
        need = max(2, m + 1 - c2)
        r = _longest(g1, start=w, allowed=base | {v, w}, touch=(frozenset({v}),), target=need)
        if r.count >= need:
            return ("b", r.path, v, w)
    if c3 is not None and "c" in cases:
        need = max(2, m + 2 - c3)
        r = _longest(g1, start=v, two_path_partner=w, allowed=base | {v, w}, target=need)
        if r.count >= need:
            return ("c", (r.path, r.second), v, w)
    if c4 is not None and "d" in cases:
        need = max(2, m + 2 - c4)
        r = _longest(g1, start=v, end=w, allowed=base | {v, w}, target=need)
        if r.count >= need:
            return ("d", r.path, v, w)
    return ()


def p143k_scheme(k: int, seed: int | str = 0, cases: str = "abcd") -> Scheme:
    """Certify the absence of induced paths on ``ceil(14k/3)-1`` vertices at radius ``k``.

    ``cases`` selects which of the four two-ECC glue rules ``a``-``d`` run;
    restricting it is only meant for isolating one rule in experiments.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    m = p143k_length(k)

    def step(view: RadiusView, memo: dict) -> bool:
        ctx = m_pathcheck(view, m, k, memo)
        _check_own_table(view, ctx, k, memo)
        if ctx["cu"] is not None:
            _three_ecc_check(ctx["gu"], ctx["wset"], ctx["edges"], ctx["halos"], ctx["lp"], ctx["cu"], m, memo)
        elif ctx["halos"].entry(view.center) is not None:
            _two_ecc_check(view, ctx, k, m, memo, cases)
        return True

    return Scheme(
        f"p143k(k={k})", k, CONSTRAINED_FIELDS, _prover(k, HALF, seed, "single", True, m), step, "decision",
        predicate=lambda g: not has_induced_path(g, m), params={"k": k, "m": m, "cases": cases},
    )


# ---------------------------------------------------------------- witness extraction


def extract_witness(g: LabeledGraph, k: int, eps: Eps, witness: tuple) -> tuple[int, ...]:
    """Assemble the full induced path behind a glue rejection, using the whole graph."""
    kind = witness[0]
    if kind == "path":
        return tuple(witness[1])
    rows = compute_ecc_table(g, k, eps)

    def tail(v: int, i: int) -> tuple[int, ...]:
        halos = Halos(rows, i)
        e = halos.entry(v)
        if e[1] == 0:
            return (v,)
        return _longest(g, start=v, allowed=halos.closer(*e) | {v}).path

    if kind == "one":
        _, p, v, i = witness
        return tuple(reversed(tail(v, i))) + tuple(p[1:])
    if kind == "two":
        _, p, v1, v2, i = witness
        return tuple(reversed(tail(v1, i))) + tuple(p[1:-1]) + tail(v2, i)
    halos = Halos(rows, TOP)
    _, p, v, w = witness
    e = halos.entry(v)
    q = halos.closer(*e)
    if kind == "a":
        inner = _longest(g, start=v, allowed=q | {v, w}).path
        return tuple(reversed(inner)) + tuple(p[1:])
    if kind == "b":
        nv = set(g.adj[v]) | {v}
        inner = _longest(g, start=w, allowed=(q - nv) | {w}).path
        return tuple(reversed(p)) + tuple(inner[1:])
    if kind == "c":
        p1, p2 = p
        inner = _longest(g, start=v, end=w, allowed=q | {v, w}).path
        return tuple(reversed(p1)) + tuple(inner[1:-1]) + tuple(p2)
    if kind == "d":
        r = _longest(g, start=v, two_path_partner=w, allowed=q | {v, w})
        return tuple(reversed(r.path)) + tuple(p[1:-1]) + tuple(r.second)
    raise ValueError(f"unknown witness kind {kind!r}")
