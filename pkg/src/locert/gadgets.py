"""Lower-bound gadgets: cliques chained by matchings and antimatchings that
carry two pair families at their ends, plus the counting bound they imply.

``G_{k,n}(A, B)`` contains an induced copy of ``T`` exactly when ``A`` and
``B`` share a pair. Identifier layout is frozen: clique vertex ``(b, j, i)``
(side ``b``, level ``j``, position ``i``) gets ``b*2k*n + (j-1)*n + i``; the
remaining vertices follow in a fixed order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from . import codec
from .graph import LabeledGraph, norm_edge, view_skeleton
from .oracles import DEFAULT_EMBED_CAP, iter_embeddings


class GadgetShapeError(ValueError):
    """``T`` violates the construction's preconditions."""


class LayoutError(AssertionError):
    """Instances that should share an identifier layout do not."""


@dataclass(frozen=True)
class PairFamily:
    n: int
    pairs: frozenset[tuple[int, int]]

    def __init__(self, n: int, pairs: Iterable[Iterable[int]] = ()) -> None:
        norm = set()
        for p in pairs:
            i, j = sorted(p)
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"bad pair {p!r} for n={n}")
            norm.add((i, j))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", frozenset(norm))

    def complement(self) -> "PairFamily":
        return PairFamily(self.n, (p for p in combinations(range(1, self.n + 1), 2) if p not in self.pairs))

    def intersects(self, other: "PairFamily") -> bool:
        return bool(self.pairs & other.pairs)


def random_family(n: int, rng: random.Random, density: float = 0.5) -> PairFamily:
    return PairFamily(n, (p for p in combinations(range(1, n + 1), 2) if rng.random() < density))


def bipartite_encoder(a: PairFamily) -> LabeledGraph:
    """Parts ``1..n`` and ``n+1..2n`` (``i'`` is ``n+i``); ``ii'`` always, ``ij', ji'`` unless ``{i,j}`` in ``A``."""
    n = a.n
    edges = [(i, n + i) for i in range(1, n + 1)]
    for i, j in combinations(range(1, n + 1), 2):
        if (i, j) not in a.pairs:
            edges += [(i, n + j), (j, n + i)]
    return LabeledGraph(range(1, 2 * n + 1), edges)


# ---------------------------------------------------------------- construction


@dataclass(frozen=True)
class GadgetInstance:
    k: int
    n: int
    graph: LabeledGraph
    clique_index: Mapping[tuple[int, int, int], int]
    # copies of T vertices outside the cliques, keyed by their label in T
    extras: Mapping[int, int]
    # path labels of T: v_1^0 .. v_2k^0, w, v_2k^1 .. v_1^1
    spine: tuple[int, ...]
    pending: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    @property
    def w(self) -> int:
        return self.extras[self.spine[2 * self.k]]

    def clique(self, b: int, j: int) -> list[int]:
        return [self.clique_index[(b, j, i)] for i in range(1, self.n + 1)]

    def locate(self, v: int) -> tuple[int, int, int] | None:
        inv = {x: key for key, x in self.clique_index.items()}
        return inv.get(v)

    def mapping_text(self) -> str:
        """Sidecar document: one line per clique vertex, then one per extra vertex."""
        lines = [f"clique {b} {j} {i} {v}" for (b, j, i), v in sorted(self.clique_index.items())]
        lines += [f"extra {t} {v}" for t, v in sorted(self.extras.items(), key=lambda kv: kv[1])]
        return "\n".join(lines) + "\n"


def _is_path(t: LabeledGraph) -> bool:
    return t.is_connected and t.m == t.n - 1 and all(t.degree(v) <= 2 for v in t.vertices)


def _tree_paths(t: LabeledGraph, length: int) -> Iterable[tuple[int, ...]]:
    """Every path with ``length`` edges, each listed once (smaller orientation)."""
    for s in sorted(t.vertices):
        stack = [(s,)]
        while stack:
            p = stack.pop()
            if len(p) == length + 1:
                if p <= p[::-1]:
                    yield p
                continue
            for y in t.adj[p[-1]]:
                if len(p) < 2 or y != p[-2]:
                    stack.append(p + (y,))


def choose_spine(t: LabeledGraph, k: int) -> tuple[int, ...]:
    """Lexicographically smallest leafless path on ``4k`` edges of ``t``."""
    best = None
    for p in _tree_paths(t, 4 * k):
        if all(t.degree(v) >= 2 for v in p):
            if best is None or p < best:
                best = p
    if best is None:
        raise GadgetShapeError(f"T has no leafless path on {4 * k} edges")
    return best


def _check_shape(t: LabeledGraph, k: int) -> None:
    if not (t.is_connected and t.m == t.n - 1):
        raise GadgetShapeError("T must be a tree")
    if _is_path(t):
        if t.n < 4 * k + 3:
            raise GadgetShapeError(f"a path T needs at least {4 * k + 3} vertices")
        return
    diameter = max(max(t.distances_from([v]).values()) for v in t.vertices)
    if diameter < 4 * k + 2:
        raise GadgetShapeError(f"T has diameter {diameter}, at least {4 * k + 2} required")
    if any(t.degree(v) == 2 for v in t.vertices):
        raise GadgetShapeError("T must have no vertex of degree two")


def build_gadget(k: int, n: int, t: LabeledGraph, a: PairFamily, b: PairFamily) -> GadgetInstance:
    if k < 1 or n < 2:
        raise ValueError("need k >= 1 and n >= 2")
    if a.n != n or b.n != n:
        raise ValueError("pair families must live on [1, n]")
    _check_shape(t, k)
    spine = choose_spine(t, k)
    levels = 2 * k
    cid = {(s, j, i): s * levels * n + (j - 1) * n + i for s in (0, 1) for j in range(1, levels + 1) for i in range(1, n + 1)}
    edges: set[tuple[int, int]] = set()
    for s in (0, 1):
        for j in range(1, levels + 1):
            for i1, i2 in combinations(range(1, n + 1), 2):
                edges.add(norm_edge(cid[(s, j, i1)], cid[(s, j, i2)]))
    for fam, j in ((a, 1), (b, levels)):
        enc = bipartite_encoder(fam)
        for x, y in enc.edges:
            edges.add(norm_edge(cid[(0, j, x)], cid[(1, j, y - n)]))
    for j in range(2, levels):
        for i in range(1, n + 1):
            edges.add(norm_edge(cid[(0, j, i)], cid[(1, j, i)]))
    for j in range(1, levels):
        for s1 in (0, 1):
            for s2 in (0, 1):
                for i1 in range(1, n + 1):
                    for i2 in range(1, n + 1):
                        if i1 != i2:
                            edges.add(norm_edge(cid[(s1, j, i1)], cid[(s2, j + 1, i2)]))
    # spine positions: v_a^0 is spine[a-1], w is spine[2k], v_a^1 is spine[4k+1-a]
    slot = {}
    for a_ in range(1, levels + 1):
        slot[spine[a_ - 1]] = (0, a_)
        slot[spine[4 * k + 1 - a_]] = (1, a_)
    w_label = spine[2 * k]
    on_spine = set(spine)
    rest = t.induced_subgraph(v for v in t.vertices if v not in on_spine)
    comp_of = {}
    for comp in rest.components:
        for v in comp:
            comp_of[v] = frozenset(comp)
    groups: dict[tuple[int, int], list[frozenset[int]]] = {}
    w_side: list[frozenset[int]] = []
    for p in spine:
        for y in sorted(t.adj[p]):
            if y in on_spine:
                continue
            if p == w_label:
                w_side.append(comp_of[y])
            else:
                groups.setdefault(slot[p], []).append(comp_of[y])
    extras: dict[int, int] = {}
    pending: dict[tuple[int, int], tuple[int, ...]] = {}
    nxt = 2 * levels * n + 1
    order = [(0, j) for j in range(1, levels + 1)] + [(1, j) for j in range(1, levels + 1)]
    for key in order:
        ids = []
        for comp in groups.get(key, []):
            for v in sorted(comp):
                extras[v] = nxt
                ids.append(nxt)
                nxt += 1
        if ids:
            pending[key] = tuple(ids)
    extras[w_label] = nxt
    nxt += 1
    for comp in w_side:
        for v in sorted(comp):
            extras[v] = nxt
            nxt += 1
    for x, y in t.edges:
        if x in extras and y in extras:
            edges.add(norm_edge(extras[x], extras[y]))
        elif x in extras or y in extras:
            out, sp = (x, y) if x in extras else (y, x)
            if sp == w_label:
                edges.add(norm_edge(extras[out], extras[w_label]))
            elif out != w_label:
                s, j = slot[sp]
                for i in range(1, n + 1):
                    edges.add(norm_edge(extras[out], cid[(s, j, i)]))
    for s in (0, 1):
        for i in range(1, n + 1):
            edges.add(norm_edge(extras[w_label], cid[(s, levels, i)]))
    g = LabeledGraph(range(1, nxt), edges)
    if g.n != 4 * k * (n - 1) + t.n:
        raise AssertionError("vertex count differs from 4k(n-1)+|T|")
    return GadgetInstance(k, n, g, cid, extras, spine, pending)


def path_tree(k: int) -> LabeledGraph:
    m = 4 * k + 3
    return LabeledGraph(range(1, m + 1), ((i, i + 1) for i in range(1, m)))


# ---------------------------------------------------------------- checks


def find_copies(inst: GadgetInstance, t: LabeledGraph, limit: int | None = 1, cap: int = DEFAULT_EMBED_CAP) -> list[dict[int, int]]:
    out = []
    for emb in iter_embeddings(inst.graph, t, "induced", cap=cap):
        out.append(emb)
        if limit is not None and len(out) >= limit:
            break
    return out


def proposition_check(k: int, n: int, t: LabeledGraph, a: PairFamily, b: PairFamily, cap: int = DEFAULT_EMBED_CAP) -> tuple[bool, bool]:
    """``(contains_T, pairs_intersect)``; the construction is correct when they agree."""
    inst = build_gadget(k, n, t, a, b)
    return bool(find_copies(inst, t, cap=cap)), a.intersects(b)


@dataclass(frozen=True)
class EmbeddingProfile:
    clique_vertices: int
    outside: frozenset[int]
    per_clique: Mapping[tuple[int, int], int]

    def antimatched_doubles(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Pairs of antimatched cliques that both host two embedded vertices."""
        full = [c for c, x in self.per_clique.items() if x >= 2]
        return [(c1, c2) for c1 in full for c2 in full if c1 < c2 and abs(c1[1] - c2[1]) == 1]


def embedding_profile(inst: GadgetInstance, emb: Mapping[int, int]) -> EmbeddingProfile:
    per: dict[tuple[int, int], int] = {}
    outside = set()
    inv = {x: key for key, x in inst.clique_index.items()}
    for v in emb.values():
        key = inv.get(v)
        if key is None:
            outside.add(v)
        else:
            per[(key[0], key[1])] = per.get((key[0], key[1]), 0) + 1
    return EmbeddingProfile(sum(per.values()), frozenset(outside), per)


# ---------------------------------------------------------------- indistinguishability


def serialize_view(g: LabeledGraph, v: int, radius: int, certs: Mapping[int, object]) -> str:
    """Canonical text of the radius view: distances, visible edges and certificate bits."""
    sk = view_skeleton(g, v, radius)
    parts = [f"c {v} {radius}"]
    for x in sorted(sk.dist):
        parts.append(f"d {x} {sk.dist[x]} {codec.encode(certs[x])}")
    for x in sorted(sk.adj):
        for y in sorted(sk.adj[x]):
            if x < y:
                parts.append(f"e {x} {y}")
    return "\n".join(parts)


def _default_certs(g: LabeledGraph, seed: int | str) -> dict[int, object]:
    rng = random.Random(f"certs:{seed}")
    return {v: codec.Bits("".join(rng.choice("01") for _ in range(16))) for v in sorted(g.vertices)}


def hybrid_view_experiment(
    k: int,
    n: int,
    a: PairFamily,
    b: PairFamily,
    *,
    t: LabeledGraph | None = None,
    scheme=None,
    seed: int | str = 0,
    shuffle: bool = False,
) -> bool:
    """Whether every vertex of ``G(B, A-bar)`` sees what it sees in the graph its half comes from.

    One certificate function (honest for ``G(B, B-bar)`` under ``scheme`` when
    given, seeded bits otherwise) is used on all three graphs. Vertices of the
    cliques at levels ``<= k`` and their pending vertices are compared with
    ``G(B, B-bar)``; the others with ``G(A, A-bar)``. ``shuffle`` relabels the
    hybrid graph at random, a negative control for the frozen layout.
    """
    t = path_tree(k) if t is None else t
    hybrid = build_gadget(k, n, t, b, a.complement())
    left_ref = build_gadget(k, n, t, b, b.complement())
    right_ref = build_gadget(k, n, t, a, a.complement())
    if not (hybrid.clique_index == left_ref.clique_index == right_ref.clique_index and hybrid.extras == left_ref.extras == right_ref.extras):
        raise LayoutError("gadgets do not share an identifier layout")
    hg = hybrid.graph
    if shuffle:
        ids = list(hg.vertices)
        perm = dict(zip(ids, random.Random(f"shuffle:{seed}").sample(ids, len(ids))))
        hg = hg.relabel(perm)
    certs = scheme.prove(left_ref.graph).records if scheme is not None else _default_certs(left_ref.graph, seed)
    left = set()
    for (s, j, i), v in hybrid.clique_index.items():
        if j <= k:
            left.add(v)
    for (s, j), ids in hybrid.pending.items():
        if j <= k:
            left.update(ids)
    for v in sorted(hybrid.graph.vertices):
        ref = left_ref.graph if v in left else right_ref.graph
        if v not in hg or serialize_view(hg, v, k, certs) != serialize_view(ref, v, k, certs):
            return False
    return True


# ---------------------------------------------------------------- counting


def fooling_bound(n: int, k: int, t_size: int) -> int:
    """Smallest certificate size ``m`` with ``n(n-1)/2 <= m(4kn + |T|)``."""
    if n < 1 or k < 1 or t_size < 1:
        raise ValueError("inputs must be positive")
    return -(-n * (n - 1) // (2 * (4 * k * n + t_size)))


def fooling_table(ns: Iterable[int], k: int, t_size: int) -> list[tuple[int, int, float]]:
    return [(n, fooling_bound(n, k, t_size), fooling_bound(n, k, t_size) / n) for n in ns]
