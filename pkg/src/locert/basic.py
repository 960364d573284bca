"""Acyclicity, K_q-freeness at radius 1 and centered-H freeness at radius d."""

from __future__ import annotations

from itertools import combinations

from .codec import Bits
from .framework import Reject, Scheme
from .graph import LabeledGraph, RadiusView
from .mapschemes import RENAMING_FIELDS, check_renaming, prove_renaming
from .oracles import contains, find_induced_embedding


# ---------------------------------------------------------------- acyclicity


def prove_acyclicity(g: LabeledGraph) -> dict[int, tuple[int]]:
    """Distance to the minimum identifier of each component."""
    out = {}
    for comp in g.components:
        for v, d in g.distances_from([min(comp)]).items():
            out[v] = (d,)
    return out


def acyclicity_step(view: RadiusView, memo: dict | None = None) -> bool:
    u = view.center
    (label,) = view.cert(u)
    if type(label) is not int or label < 0:
        raise Reject("label-format")
    others = [view.cert(w)[0] for w in view.adj[u]]
    if label == 0:
        if any(x != 1 for x in others):
            raise Reject("root-neighbor")
        return True
    below = sum(1 for x in others if x == label - 1)
    if below != 1:
        raise Reject("parent-count")
    if any(x != label - 1 and x != label + 1 for x in others):
        raise Reject("neighbor-label")
    return True


def is_forest(g: LabeledGraph) -> bool:
    return g.m == g.n - len(g.components)


def acyclicity_scheme() -> Scheme:
    return Scheme("acyclicity", 1, ("dist",), prove_acyclicity, acyclicity_step, "decision", predicate=is_forest)


# ---------------------------------------------------------------- bit vectors over new names

VECTOR_FIELDS = RENAMING_FIELDS + ("vector",)


def prove_vectors(g: LabeledGraph) -> dict[int, tuple]:
    """Renaming certificate plus the indicator vector of the neighbours' new names."""
    ren = prove_renaming(g)
    size = {v: len(g.component_of[v]) for v in g.vertices}
    out = {}
    for v in g.vertices:
        bits = ["0"] * size[v]
        for w in g.adj[v]:
            bits[ren[w][3] - 1] = "1"
        out[v] = ren[v] + (Bits("".join(bits)),)
    return out


def _vector(view: RadiusView, x: int) -> Bits:
    vec = view.cert(x)[4]
    if not isinstance(vec, Bits):
        raise Reject("vector-format")
    return vec


def _name(view: RadiusView, x: int) -> int:
    lo = view.cert(x)[3]
    if type(lo) is not int or lo < 1:
        raise Reject("renaming-format")
    return lo


def check_vectors(view: RadiusView, memo: dict) -> int:
    """Renaming check plus exactness of the own vector and the neighbours' bit."""
    u = view.center
    name = check_renaming(view, memo)
    vec = _vector(view, u)
    nbrs = view.adj[u]
    names = {_name(view, w) for w in nbrs}
    if len(names) != len(nbrs) or name in names:
        raise Reject("vector-names")
    for w in nbrs:
        other = _vector(view, w)
        if len(other) != len(vec):
            raise Reject("vector-length")
    if name > len(vec) or any(x > len(vec) for x in names):
        raise Reject("vector-length")
    ones = {i + 1 for i, b in enumerate(vec) if b == "1"}
    if ones != names:
        raise Reject("vector-own")
    for w in nbrs:
        if _vector(view, w)[name - 1] != "1":
            raise Reject("vector-neighbor")
    return name


def _adjacent(view: RadiusView, x: int, y: int) -> bool:
    vec = _vector(view, x)
    ny = _name(view, y)
    return ny <= len(vec) and vec[ny - 1] == "1"


def kk_free_scheme(q: int) -> Scheme:
    """Certify K_q-freeness at radius 1 with ``n``-bit neighbourhood vectors."""
    if q < 3:
        raise ValueError("clique size must be at least 3")

    def step(view: RadiusView, memo: dict) -> bool:
        check_vectors(view, memo)
        u = view.center
        nbrs = sorted(view.adj[u], key=lambda x: -view.cert(x)[4].count("1"))
        adj = {x: {y for y in nbrs if y != x and _adjacent(view, x, y)} for x in nbrs}

        def grow(clique: list[int], cands: list[int]) -> bool:
            if len(clique) == q - 1:
                return True
            for i, x in enumerate(cands):
                if grow(clique + [x], [y for y in cands[i + 1 :] if y in adj[x]]):
                    return True
            return False

        if grow([], nbrs):
            raise Reject("clique")
        return True

    clique = LabeledGraph(range(1, q + 1), combinations(range(1, q + 1), 2))

    def predicate(g: LabeledGraph) -> bool:
        return not contains(g, clique, "subgraph")

    return Scheme(f"kk_free(q={q})", 1, VECTOR_FIELDS, prove_vectors, step, "decision", predicate=predicate, params={"q": q})


def centered_h_scheme(h: LabeledGraph, w: int, d: int) -> Scheme:
    """Certify the absence of induced copies of ``h`` whose vertex ``w`` sees all of ``h``
    within distance ``d``; every vertex tries to be the image of ``w``."""
    ecc = max(h.distances_from([w]).values(), default=0)
    if len(h.components) > 1 or ecc > d:
        raise ValueError("every vertex of H must lie within distance d of w")

    def step(view: RadiusView, memo: dict) -> bool:
        check_vectors(view, memo)
        u = view.center
        verts = list(view.dist)
        byname = {}
        for x in verts:
            nx_ = _name(view, x)
            if nx_ in byname:
                raise Reject("vector-names")
            byname[nx_] = x
        edges = set()
        for x in verts:
            if view.dist[x] < d:
                edges.update((min(x, y), max(x, y)) for y in view.adj[x])
            else:
                vec = _vector(view, x)
                for i, b in enumerate(vec, start=1):
                    y = byname.get(i)
                    if b == "1" and y is not None and view.dist[y] == d:
                        edges.add((min(x, y), max(x, y)))
        ball = LabeledGraph(verts, edges)
        if find_induced_embedding(ball, h, "induced", pinned={w: u}) is not None:
            raise Reject("copy")
        return True

    def predicate(g: LabeledGraph) -> bool:
        return not contains(g, h, "induced")

    return Scheme(f"centered_h(d={d})", d, VECTOR_FIELDS, prove_vectors, step, "decision", predicate=predicate, params={"d": d})
