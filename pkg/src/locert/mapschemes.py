"""Local computation schemes for the ECC table and witnessed graphs, the
radius-2 spread-universal scheme and identifier renaming.

Records of every scheme built on the layered map start with the fields
``tree``, ``table`` and ``components``; the witnessed-graph scheme appends
``pieces``. Field layouts:

* ``tree``: sorted ``(id, parent)`` pairs, parent ``0`` for roots; one BFS tree
  per connected component, rooted at its minimum identifier.
* ``table``: sorted ``(id, row)`` pairs; ``row[i-1]`` is ``(ecc id, distance)`` or ``None``.
* ``components``: sorted ``(i, ecc id, edges)``; ``edges`` spans the ECC in the
  auxiliary graph, each edge ``(a, b, w)`` carrying a vertex ``w`` within
  distance ``k-1`` of both ends.
* ``pieces``: per layer ``j``, the ``(index, tokens)`` pieces of the layer-``j``
  adjacency list held by the vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .codec import Bits
from .framework import Reject, Scheme
from .graph import LabeledGraph, RadiusView, norm_edge
from .layers import (
    Entry,
    Eps,
    compute_eccs,
    compute_ecc_table,
    coupon_assignment,
    adjacency_tokens,
    layer_count,
    layer_of_degree,
    parse_adjacency_tokens,
    piece_count,
    split_tokens,
    table_layer,
    witnessed_graph,
    witnessed_set_from_table,
)

TREE, TABLE, COMPONENTS, PIECES = 0, 1, 2, 3
LAYERED_FIELDS = ("tree", "table", "components")
WITNESS_FIELDS = LAYERED_FIELDS + ("pieces",)


# ---------------------------------------------------------------- provers


def prove_tree(g: LabeledGraph) -> tuple[tuple[int, int], ...]:
    parent: dict[int, int] = {}
    for comp in g.components:
        root = min(comp)
        parent[root] = 0
        frontier = [root]
        while frontier:
            nxt = []
            for x in frontier:
                for y in sorted(g.adj[x]):
                    if y not in parent:
                        parent[y] = x
                        nxt.append(y)
            frontier = nxt
    return tuple(sorted(parent.items()))


def _midpoint(g: LabeledGraph, a: int, b: int, da: Mapping[int, int], limit: int) -> int:
    db = g.distances_from([b], limit=limit)
    d = da[b]
    half = d // 2
    return min(w for w, x in da.items() if x == half and db.get(w) == d - half)


def prove_layered(g: LabeledGraph, k: int, eps: Eps) -> tuple[tuple, tuple, tuple]:
    """The shared ``tree``, ``table`` and ``components`` fields."""
    eccs = compute_eccs(g, k, eps)
    table = compute_ecc_table(g, k, eps, eccs)
    reach = 2 * k - 2
    balls: dict[int, dict[int, int]] = {}
    comps = []
    for i in sorted(eccs):
        for comp in eccs[i]:
            root = min(comp)
            seen = {root}
            edges = []
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    ball = balls.get(x)
                    if ball is None:
                        ball = balls[x] = g.distances_from([x], limit=reach)
                    for y in sorted(ball):
                        if y in comp and y not in seen:
                            seen.add(y)
                            edges.append((x, y, _midpoint(g, x, y, ball, reach)))
                            nxt.append(y)
                frontier = nxt
            comps.append((i, root, tuple(edges)))
    return prove_tree(g), tuple(sorted(table.items())), tuple(comps)


def table_tuple(g: LabeledGraph, k: int, eps: Eps) -> tuple:
    return tuple(sorted(compute_ecc_table(g, k, eps).items()))


def prove_pieces(g: LabeledGraph, eps: Eps, seed: int | str = 0) -> dict[int, tuple]:
    n = g.n
    if n == 0:
        return {}
    count = layer_count(n, eps)
    layer = {v: layer_of_degree(g.degree(v), n, eps) for v in g.vertices}
    per_vertex: dict[int, list[tuple]] = {v: [] for v in g.vertices}
    for j in range(1, count + 1):
        d = piece_count(n, eps, j)
        tokens = adjacency_tokens(g, [v for v in g.vertices if layer[v] <= j])
        pieces = split_tokens(tokens, d)
        held = coupon_assignment(g, d, seed=f"{seed}:{j}").held
        for v in g.vertices:
            per_vertex[v].append(tuple((idx, pieces[idx - 1]) for idx in held[v]))
    return {v: tuple(p) for v, p in per_vertex.items()}


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class Layered:
    """Decoded shared fields that passed every check not needing a view."""

    parent: dict[int, int]
    children: dict[int, tuple[int, ...]]
    n: int
    count: int
    rows: dict[int, tuple[Entry, ...]]
    incident: dict[tuple[int, int], tuple[int, ...]]
    table: tuple


def _check_tree(tree: Any) -> tuple[dict[int, int], dict[int, tuple[int, ...]]]:
    parent: dict[int, int] = {}
    last = 0
    for x, p in tree:
        if type(x) is not int or type(p) is not int or x <= last or p < 0 or p == x:
            raise Reject("tree-format")
        parent[x] = p
        last = x
    children: dict[int, list[int]] = {}
    for x, p in parent.items():
        if p:
            if p not in parent:
                raise Reject("tree-format")
            children.setdefault(p, []).append(x)
    # acyclicity of the parent pointers
    state: dict[int, int] = {}
    for x in parent:
        chain = []
        y = x
        while y and state.get(y) is None:
            state[y] = 1
            chain.append(y)
            y = parent[y]
        if y and state.get(y) == 1:
            raise Reject("tree-cycle")
        for z in chain:
            state[z] = 2
    return parent, {p: tuple(c) for p, c in children.items()}


def layered_globals(tree: Any, table: Any, comps: Any, k: int, eps: Eps, memo: dict) -> Layered:
    key = ("layered", k, eps, tree, table, comps)
    hit = memo.get(key)
    if hit is not None:
        if isinstance(hit, Reject):
            raise Reject(hit.reason)
        return hit
    try:
        out = _layered_globals(tree, table, comps, k, eps)
    except Reject as r:
        memo[key] = r
        raise
    memo[key] = out
    return out


def _layered_globals(tree: Any, table: Any, comps: Any, k: int, eps: Eps) -> Layered:
    parent, children = _check_tree(tree)
    n = len(parent)
    count = layer_count(n, eps)
    rows: dict[int, tuple[Entry, ...]] = {}
    for x, row in table:
        if x in rows or x not in parent or len(row) != count:
            raise Reject("table-format")
        for e in row:
            if e is not None:
                c, d = e
                if type(c) is not int or type(d) is not int or c not in parent or not 0 <= d <= k - 1:
                    raise Reject("table-format")
        rows[x] = tuple(row)
    if len(rows) != n:
        raise Reject("table-format")
    classes: dict[tuple[int, int], list[int]] = {}
    for x, row in rows.items():
        for i, e in enumerate(row, start=1):
            if e is not None and e[1] == 0:
                classes.setdefault((i, e[0]), []).append(x)
    for (i, c), members in classes.items():
        if min(members) != c:
            raise Reject("ecc-id")
    for x, row in rows.items():
        for i, e in enumerate(row, start=1):
            if e is not None and e[1] > 0 and (i, e[0]) not in classes:
                raise Reject("ecc-id")
    incident: dict[tuple[int, int], list[int]] = {}
    keys = set()
    for i, c, edges in comps:
        key = (i, c)
        if key in keys or key not in classes:
            raise Reject("components-format")
        keys.add(key)
        members = set(classes[key])
        if len(edges) != len(members) - 1:
            raise Reject("components-tree")
        uf = {x: x for x in members}

        def find(x: int) -> int:
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        for a, b, w in edges:
            if a not in members or b not in members or w not in parent:
                raise Reject("components-tree")
            ra, rb = find(a), find(b)
            if ra == rb:
                raise Reject("components-tree")
            uf[ra] = rb
            incident.setdefault((i, a), []).append(w)
            incident.setdefault((i, b), []).append(w)
    if keys != set(classes):
        raise Reject("components-format")
    return Layered(parent, children, n, count, rows, {x: tuple(w) for x, w in incident.items()}, tuple(table))


def view_layers(view: RadiusView, n: int, eps: Eps, k: int) -> dict[int, int]:
    """Layer of every vertex whose degree the view determines (distance < radius)."""
    return {x: layer_of_degree(len(view.adj[x]), n, eps) for x, dx in view.dist.items() if dx <= k - 1}


def check_layered(view: RadiusView, k: int, eps: Eps, memo: dict) -> Layered:
    """Verification of the ECC table; returns the decoded shared fields."""
    u = view.center
    mine = view.cert(u)
    nbrs = view.adj[u]
    for w in nbrs:
        other = view.cert(w)
        for f in (TREE, TABLE, COMPONENTS):
            if other[f] is not mine[f] and other[f] != mine[f]:
                raise Reject("neighbor-mismatch")
    glob = layered_globals(mine[TREE], mine[TABLE], mine[COMPONENTS], k, eps, memo)
    parent = glob.parent
    if u not in parent:
        raise Reject("tree-missing")
    p = parent[u]
    if p and p not in nbrs:
        raise Reject("tree-parent")
    if any(w not in parent for w in nbrs):
        raise Reject("tree-neighbor")
    if any(c not in nbrs for c in glob.children.get(u, ())):
        raise Reject("tree-child")
    layers = view_layers(view, glob.n, eps, k)
    lu = layers[u]
    row_u = glob.rows[u]
    dist = view.dist
    for i in range(1, glob.count + 1):
        high = [x for x, li in layers.items() if li >= i]
        entries = {glob.rows[x][i - 1] for x in high}
        if len(entries) > 1 or any(e is None or e[1] != 0 for e in entries):
            raise Reject("ecc-split")
        if i <= lu:
            for w in glob.incident.get((i, u), ()):
                if dist.get(w, k) > k - 1:
                    raise Reject("ecc-witness")
        elif not high:
            if row_u[i - 1] is not None:
                raise Reject("table-distance")
        else:
            expected = (next(iter(entries))[0], min(dist[x] for x in high))
            if row_u[i - 1] != expected:
                raise Reject("table-distance")
    return glob


def tg_scheme(eps: Eps, k: int) -> Scheme:
    """Local computation scheme whose output at every vertex is the ECC table."""
    if k < 2:
        raise ValueError("k must be at least 2")

    def prover(g: LabeledGraph) -> dict[int, tuple]:
        shared = prove_layered(g, k, eps)
        return {v: shared for v in g.vertices}

    def step(view: RadiusView, memo: dict) -> tuple:
        return check_layered(view, k, eps, memo).table

    def target(g: LabeledGraph) -> dict[int, tuple]:
        t = table_tuple(g, k, eps)
        return {v: t for v in g.vertices}

    return Scheme(f"tg(k={k},eps={eps})", k, LAYERED_FIELDS, prover, step, "computation", target, params={"k": k, "eps": eps})


# ---------------------------------------------------------------- witnessed graphs


def check_pieces(view: RadiusView, glob: Layered, eps: Eps, memo: dict) -> dict[tuple[int, int], tuple]:
    """Pieces held by view vertices; equal indices must carry equal payloads."""
    seen: dict[tuple[int, int], tuple] = {}
    counts = [piece_count(glob.n, eps, j) for j in range(1, glob.count + 1)]
    for x in view.dist:
        pcs = view.cert(x)[PIECES]
        if len(pcs) != glob.count:
            raise Reject("piece-format")
        for j, layer_pieces in enumerate(pcs, start=1):
            for idx, payload in layer_pieces:
                if type(idx) is not int or not 1 <= idx <= counts[j - 1] or type(payload) is not tuple:
                    raise Reject("piece-format")
                prev = seen.get((j, idx))
                if prev is None:
                    seen[(j, idx)] = payload
                elif prev is not payload and prev != payload:
                    raise Reject("piece-conflict")
    return seen


def _rows_from_pieces(view: RadiusView, glob: Layered, eps: Eps, w: int, j: int, memo: dict) -> dict[int, tuple[int, ...]]:
    d = piece_count(glob.n, eps, j)
    found: dict[int, tuple] = {}
    for x in (w, *view.adj[w]):
        for idx, payload in view.cert(x)[PIECES][j - 1]:
            found.setdefault(idx, payload)
    if len(found) < d:
        raise Reject("piece-missing")
    payloads = tuple(found[i] for i in range(1, d + 1))
    key = ("rows", payloads)
    rows = memo.get(key)
    if rows is None:
        tokens = tuple(t for p in payloads for t in p)
        try:
            rows = parse_adjacency_tokens(tokens)
        except ValueError:
            rows = Reject("piece-format")
        memo[key] = rows
    if isinstance(rows, Reject):
        raise Reject(rows.reason)
    return rows


def reconstruct_witnessed(view: RadiusView, glob: Layered, eps: Eps, w: int, memo: dict, check_own_row: bool = False) -> tuple[frozenset[int], tuple[tuple[int, int], ...]]:
    """``G_{<=w}`` from the pieces held in ``N[w]``; ``w`` must be within distance ``k-1``."""
    lw = layer_of_degree(len(view.adj[w]), glob.n, eps)
    rows_by_layer = {j: _rows_from_pieces(view, glob, eps, w, j, memo) for j in range(1, lw + 1)}
    if check_own_row and rows_by_layer[lw].get(w) != tuple(sorted(view.adj[w])):
        raise Reject("piece-row")
    key = ("wset", glob.table, w)
    wset = memo.get(key)
    if wset is None:
        wset = memo[key] = witnessed_set_from_table(glob.rows, w)
    edges = set()
    for v in wset:
        li = table_layer(glob.rows[v])
        row = rows_by_layer.get(li, {}).get(v)
        if row is None:
            raise Reject("piece-row-missing")
        for y in row:
            if y == v:
                raise Reject("piece-format")
            edges.add(norm_edge(v, y))
    return wset, tuple(sorted(edges))


def graph_of(wset: frozenset[int], edges: tuple[tuple[int, int], ...], memo: dict) -> LabeledGraph:
    key = ("graph", wset, edges)
    g = memo.get(key)
    if g is None:
        g = memo[key] = LabeledGraph(set(wset).union(*edges) if edges else wset, edges)
    return g


def check_witnessed(view: RadiusView, k: int, eps: Eps, memo: dict) -> tuple[Layered, frozenset[int], tuple]:
    glob = check_layered(view, k, eps, memo)
    check_pieces(view, glob, eps, memo)
    wset, edges = reconstruct_witnessed(view, glob, eps, view.center, memo, check_own_row=True)
    return glob, wset, edges


def gu_scheme(eps: Eps, k: int, seed: int | str = 0) -> Scheme:
    """Local computation scheme whose output at ``u`` is ``(V_{<=u}, E(G_{<=u}))``."""
    if k < 2:
        raise ValueError("k must be at least 2")

    def prover(g: LabeledGraph) -> dict[int, tuple]:
        shared = prove_layered(g, k, eps)
        pieces = prove_pieces(g, eps, seed)
        return {v: shared + (pieces[v],) for v in g.vertices}

    def step(view: RadiusView, memo: dict) -> tuple:
        _, wset, edges = check_witnessed(view, k, eps, memo)
        return wset, edges

    def target(g: LabeledGraph) -> dict[int, tuple]:
        table = compute_ecc_table(g, k, eps)
        return {v: witnessed_graph(g, k, eps, v, table).key() for v in g.vertices}

    return Scheme(f"gu(k={k},eps={eps})", k, WITNESS_FIELDS, prover, step, "computation", target, params={"k": k, "eps": eps})


# ---------------------------------------------------------------- spread universal


def spread_universal_scheme(predicate: Callable[[LabeledGraph], bool], mode: str = "regular", delta: Any = None, seed: int | str = 0) -> Scheme:
    """Radius-2 certification of an arbitrary decidable property.

    ``mode='min-degree'`` spreads ``ceil(n^delta)`` pieces of the adjacency
    matrix (rows in increasing identifier order); ``mode='regular'`` spreads
    ``d`` pieces of the adjacency list of a ``d``-regular graph.
    """
    if mode not in ("min-degree", "regular"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "min-degree":
        from fractions import Fraction

        if delta is None:
            raise ValueError("min-degree mode needs delta")
        delta = Fraction(delta)

    def piece_total(n: int, g_or_degree: int) -> int:
        if mode == "min-degree":
            return max(1, piece_count(n, delta, 2))
        return max(1, g_or_degree)

    def prover(g: LabeledGraph) -> dict[int, tuple]:
        tree = prove_tree(g)
        if g.n == 0:
            return {}
        if mode == "min-degree":
            d = piece_total(g.n, 0)
            ids = g.vertices
            bits = "".join("1" if g.has_edge(a, b) else "0" for a in ids for b in ids)
            size = max(1, -(-len(bits) // d))
            pieces = [Bits(bits[j * size : (j + 1) * size]) for j in range(d)]
        else:
            d = piece_total(g.n, min(g.degree(v) for v in g.vertices))
            pieces = split_tokens(adjacency_tokens(g, g.vertices), d)
        held = coupon_assignment(g, d, seed=f"spread:{seed}").held
        return {v: (tree, tuple((i, pieces[i - 1]) for i in held[v])) for v in g.vertices}

    def reconstruct(view: RadiusView, x: int, parent: Mapping[int, int], memo: dict) -> LabeledGraph:
        n = len(parent)
        d = piece_total(n, len(view.adj[x]))
        found: dict[int, Any] = {}
        for y in (x, *view.adj[x]):
            for idx, payload in view.cert(y)[1]:
                if type(idx) is not int or not 1 <= idx <= d:
                    raise Reject("piece-format")
                prev = found.setdefault(idx, payload)
                if prev != payload:
                    raise Reject("piece-conflict")
        if len(found) < d:
            raise Reject("piece-missing")
        payloads = tuple(found[i] for i in range(1, d + 1))
        key = ("spread", mode, payloads, tuple(parent))
        hit = memo.get(key)
        if hit is None:
            ids = sorted(parent)
            if mode == "min-degree":
                if not all(isinstance(p, Bits) for p in payloads):
                    raise Reject("piece-format")
                bits = "".join(payloads)
                if len(bits) != n * n:
                    raise Reject("piece-format")
                edges = []
                for a_i, a in enumerate(ids):
                    for b_i in range(a_i + 1, n):
                        if bits[a_i * n + b_i] != bits[b_i * n + a_i]:
                            raise Reject("piece-format")
                        if bits[a_i * n + b_i] == "1":
                            edges.append((a, ids[b_i]))
                    if bits[a_i * n + a_i] == "1":
                        raise Reject("piece-format")
                hit = LabeledGraph(ids, edges)
            else:
                rows = parse_adjacency_tokens(tuple(t for p in payloads for t in p))
                if set(rows) != set(ids) or any(y not in rows or x2 not in rows[y] for x2, r in rows.items() for y in r):
                    raise Reject("piece-format")
                hit = LabeledGraph.from_adjacency(rows)
            memo[key] = hit
        return hit

    def step(view: RadiusView, memo: dict) -> bool:
        u = view.center
        tree = view.cert(u)[0]
        for w in view.dist:
            if view.cert(w)[0] != tree:
                raise Reject("neighbor-mismatch")
        key = ("spread-tree", tree)
        parsed = memo.get(key)
        if parsed is None:
            parsed = memo[key] = _check_tree(tree)
        parent, children = parsed
        nbrs = view.adj[u]
        if u not in parent or (parent[u] and parent[u] not in nbrs) or any(w not in parent for w in nbrs):
            raise Reject("tree")
        if any(c not in nbrs for c in children.get(u, ())):
            raise Reject("tree")
        mine = reconstruct(view, u, parent, memo)
        for w in nbrs:
            if reconstruct(view, w, parent, memo) != mine:
                raise Reject("map-mismatch")
        if mine.adj.get(u) != nbrs:
            raise Reject("row-mismatch")
        pkey = ("spread-predicate", mine)
        verdict = memo.get(pkey)
        if verdict is None:
            verdict = memo[pkey] = bool(predicate(mine))
        if not verdict:
            raise Reject("predicate")
        return True

    return Scheme(f"spread({mode})", 2, ("tree", "pieces"), prover, step, "decision", predicate=predicate, params={"mode": mode})


# ---------------------------------------------------------------- renaming

RENAMING_FIELDS = ("root", "parent", "size", "lo")


def prove_renaming(g: LabeledGraph) -> dict[int, tuple[int, int, int, int]]:
    """Preorder names of the BFS tree rooted at each component's minimum identifier."""
    tree = dict(prove_tree(g))
    children: dict[int, list[int]] = {}
    for x, p in tree.items():
        if p:
            children.setdefault(p, []).append(x)
    out = {}
    for comp in g.components:
        root = min(comp)
        size: dict[int, int] = {}
        order = []
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            stack.extend(sorted(children.get(x, ()), reverse=True))
        for x in reversed(order):
            size[x] = 1 + sum(size[c] for c in children.get(x, ()))
        lo = {root: 1}
        for x in order:
            nxt = lo[x] + 1
            for c in sorted(children.get(x, ())):
                lo[c] = nxt
                nxt += size[c]
        for x in comp:
            out[x] = (root, tree[x], size[x], lo[x])
    return out


def check_renaming(view: RadiusView, memo: dict | None = None, offset: int = 0) -> int:
    """Radius-1 check of the interval certificate; returns the new name."""
    u = view.center
    root, parent, size, lo = view.cert(u)[offset : offset + 4]
    for v in (root, parent, size, lo):
        if type(v) is not int:
            raise Reject("renaming-format")
    nbrs = view.adj[u]
    if any(view.cert(w)[offset] != root for w in nbrs):
        raise Reject("renaming-root")
    if u == root:
        if parent != 0 or lo != 1:
            raise Reject("renaming-root")
    elif parent == 0 or parent not in nbrs:
        raise Reject("renaming-parent")
    kids = sorted((view.cert(w)[offset + 3], view.cert(w)[offset + 2]) for w in nbrs if view.cert(w)[offset + 1] == u)
    if size < 1 or size != 1 + sum(s for _, s in kids):
        raise Reject("renaming-size")
    nxt = lo + 1
    for clo, csize in kids:
        if clo != nxt or csize < 1:
            raise Reject("renaming-interval")
        nxt += csize
    return lo


def renaming_scheme() -> Scheme:
    """Computation scheme giving every vertex a name in ``[1, n_C]`` of its component."""

    def prover(g: LabeledGraph) -> dict[int, tuple]:
        return prove_renaming(g)

    def step(view: RadiusView, memo: dict) -> int:
        return check_renaming(view, memo)

    def target(g: LabeledGraph) -> dict[int, int]:
        return {v: r[3] for v, r in prove_renaming(g).items()}

    return Scheme("renaming", 1, RENAMING_FIELDS, prover, step, "computation", target, outputs_ok=is_component_bijection)


def is_component_bijection(g: LabeledGraph, names: Mapping[int, int]) -> bool:
    return all(sorted(names[v] for v in comp) == list(range(1, len(comp) + 1)) for comp in g.components)
