"""Degree layers, extended connected components, the ECC table and witnessed graphs.

Layer thresholds are evaluated exactly: for ``eps = p/q`` a degree lies in
``V_i`` iff ``n^((i-1)p) <= deg^q < n^(ip)``. The quasilinear setting
``eps = 1/log2 n`` is written ``"log"`` and uses the thresholds ``2^(i-1)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .graph import Edge, LabeledGraph, norm_edge

Eps = Union[Fraction, str]

# entry of the ECC table: (identifier of the ECC, distance to it) or None
Entry = Union[tuple[int, int], None]
Table = Mapping[int, tuple[Entry, ...]]


def parse_eps(text: str | Fraction | float) -> Eps:
    if isinstance(text, Fraction):
        eps: Eps = text
    elif isinstance(text, str) and text.strip().lower() in ("log", "quasilinear", "1/log"):
        return "log"
    else:
        eps = Fraction(str(text)).limit_denominator(1000) if isinstance(text, float) else Fraction(text)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    return eps


def _ceil_log2(n: int) -> int:
    return 0 if n <= 1 else (n - 1).bit_length()


def layer_count(n: int, eps: Eps) -> int:
    if eps == "log":
        return max(1, _ceil_log2(n))
    eps = Fraction(eps)
    return -(-eps.denominator // eps.numerator)


def layer_of_degree(deg: int, n: int, eps: Eps) -> int:
    """Index ``i`` with ``n^((i-1)eps) <= deg < n^(i eps)``; degree 0 goes to layer 1."""
    top = layer_count(n, eps)
    if deg <= 0:
        return 1
    if eps == "log":
        return min(top, deg.bit_length())
    eps = Fraction(eps)
    p, q = eps.numerator, eps.denominator
    dq = deg**q
    i = 1
    while i < top and dq >= n ** (i * p):
        i += 1
    return i


def _iroot_ceil(x: int, r: int) -> int:
    """Smallest integer ``y`` with ``y^r >= x``."""
    if x <= 1:
        return max(x, 0)
    lo, hi = 1, 1 << (x.bit_length() // r + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**r >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def piece_count(n: int, eps: Eps, j: int) -> int:
    """``ceil(n^((j-1) eps))``: the number of pieces of the layer-``j`` adjacency list."""
    if eps == "log":
        return 2 ** (j - 1)
    eps = Fraction(eps)
    return _iroot_ceil(n ** ((j - 1) * eps.numerator), eps.denominator)


def piece_quota(n: int, d: int) -> int:
    return min(d, max(1, math.ceil(3 * math.log2(n)))) if n > 1 else d


@dataclass(frozen=True)
class LayeredPartition:
    n: int
    eps: Eps
    count: int
    layer: Mapping[int, int]

    def V(self, i: int) -> frozenset[int]:
        return frozenset(v for v, li in self.layer.items() if li == i)

    def L(self, i: int) -> frozenset[int]:
        return frozenset(v for v, li in self.layer.items() if li <= i)

    def H(self, i: int) -> frozenset[int]:
        return frozenset(v for v, li in self.layer.items() if li >= i)


def compute_layer_partition(g: LabeledGraph, eps: Eps) -> LayeredPartition:
    n = g.n
    return LayeredPartition(n, eps, layer_count(n, eps), {v: layer_of_degree(g.degree(v), n, eps) for v in g.vertices})


def compute_eccs(g: LabeledGraph, k: int, eps: Eps, part: LayeredPartition | None = None) -> dict[int, list[frozenset[int]]]:
    """For every layer ``i``, the ECC_i classes sorted by minimum identifier.

    Classes are the components of the graph on ``H_i`` joining vertices at
    distance at most ``2k - 2``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if part is None:
        part = compute_layer_partition(g, eps)
    out: dict[int, list[frozenset[int]]] = {}
    reach = 2 * k - 2
    balls: dict[int, dict[int, int]] = {}
    for i in range(1, part.count + 1):
        high = part.H(i)
        seen: set[int] = set()
        classes = []
        for s in sorted(high):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                ball = balls.get(x)
                if ball is None:
                    ball = balls[x] = g.distances_from([x], limit=reach)
                for y in ball:
                    if y in high and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            classes.append(frozenset(comp))
        out[i] = sorted(classes, key=min)
    return out


def compute_ecc_table(g: LabeledGraph, k: int, eps: Eps, eccs: Mapping[int, list[frozenset[int]]] | None = None) -> dict[int, tuple[Entry, ...]]:
    """``T[v][i-1]`` is ``(min id of the ECC_i near v, distance)`` or ``None``."""
    part = compute_layer_partition(g, eps)
    if eccs is None:
        eccs = compute_eccs(g, k, eps, part)
    rows: dict[int, list[Entry]] = {v: [None] * part.count for v in g.vertices}
    for i in range(1, part.count + 1):
        for comp in eccs[i]:
            cid = min(comp)
            for v, d in g.distances_from(comp, limit=k - 1).items():
                cur = rows[v][i - 1]
                if cur is not None and cur != (cid, d):
                    raise AssertionError("two ECCs within distance k-1 of one vertex")
                rows[v][i - 1] = (cid, d)
    return {v: tuple(r) for v, r in rows.items()}


def table_layer(row: tuple[Entry, ...]) -> int:
    """Layer of a vertex read off its table row: the last column with distance 0."""
    layer = 0
    for i, e in enumerate(row, start=1):
        if e is not None and e[1] == 0:
            layer = i
    return layer


def witnessed_set_from_table(table: Table, u: int) -> frozenset[int]:
    """``V_{<=u}``: vertices ``v`` of some ``V_i`` sharing an ECC_i with ``u``."""
    row_u = table[u]
    mine = {i: e[0] for i, e in enumerate(row_u, start=1) if e is not None and e[1] == 0}
    out = {u}
    for v, row in table.items():
        li = table_layer(row)
        if li in mine and row[li - 1][0] == mine[li]:
            out.add(v)
    return frozenset(out)


@dataclass(frozen=True)
class WitnessedGraph:
    owner: int
    witnessed: frozenset[int]
    graph: LabeledGraph

    def key(self) -> tuple[frozenset[int], tuple[Edge, ...]]:
        return self.witnessed, self.graph.edges


def witnessed_graph_from(g: LabeledGraph, wset: Iterable[int], owner: int) -> WitnessedGraph:
    ws = frozenset(wset)
    edges = {norm_edge(v, x) for v in ws for x in g.adj[v]}
    verts = set(ws)
    for a, b in edges:
        verts.add(a)
        verts.add(b)
    return WitnessedGraph(owner, ws, LabeledGraph(verts, edges))


def witnessed_graph(g: LabeledGraph, k: int, eps: Eps, u: int, table: Table | None = None) -> WitnessedGraph:
    """``G_{<=u}``: the edges of ``g`` with at least one endpoint in ``V_{<=u}``."""
    if u not in g:
        raise KeyError(f"unknown vertex {u}")
    if table is None:
        table = compute_ecc_table(g, k, eps)
    return witnessed_graph_from(g, witnessed_set_from_table(table, u), u)


# ---------------------------------------------------------------- piece spreading


@dataclass(frozen=True)
class PieceSet:
    """Piece indices (1-based) held by every vertex for one split into ``d`` pieces."""

    d: int
    quota: int
    held: Mapping[int, tuple[int, ...]]
    overflow: frozenset[int]
    attempts: int


def coverage_defects(g: LabeledGraph, d: int, held: Mapping[int, Iterable[int]]) -> dict[int, set[int]]:
    """Missing piece indices in ``N[v]`` for every vertex of degree at least ``d``."""
    out = {}
    for v in g.vertices:
        if g.degree(v) < d:
            continue
        seen = set(held.get(v, ()))
        for w in g.adj[v]:
            seen.update(held.get(w, ()))
        missing = set(range(1, d + 1)) - seen
        if missing:
            out[v] = missing
    return out


def coupon_assignment(g: LabeledGraph, d: int, seed: int | str = 0, quota: int | None = None, retries: int = 64) -> PieceSet:
    """Random assignment of ``quota`` piece indices per vertex with validated coverage.

    Fresh seeded draws are attempted up to ``retries`` times; if none covers
    every vertex of degree at least ``d``, the last draw is repaired greedily by
    handing each missing piece to the highest-degree neighbour, which may
    exceed the quota (reported in ``overflow``).
    """
    if d < 1:
        raise ValueError("piece count must be positive")
    if quota is None:
        quota = piece_quota(g.n, d)
    quota = min(quota, d)
    if quota >= d:
        full = tuple(range(1, d + 1))
        return PieceSet(d, quota, {v: full for v in g.vertices}, frozenset(), 0)
    held: dict[int, set[int]] = {}
    for attempt in range(1, retries + 1):
        rng = random.Random(f"{seed}:{d}:{attempt}")
        held = {v: set(rng.sample(range(1, d + 1), quota)) for v in g.vertices}
        if not coverage_defects(g, d, held):
            return PieceSet(d, quota, {v: tuple(sorted(s)) for v, s in held.items()}, frozenset(), attempt)
    overflow = set()
    for v, missing in sorted(coverage_defects(g, d, held).items()):
        for piece in sorted(missing):
            target = max(g.adj[v], key=lambda w: (g.degree(w), -w))
            held[target].add(piece)
            overflow.add(target)
    if coverage_defects(g, d, held):
        raise AssertionError("greedy repair failed to cover every piece")
    return PieceSet(d, quota, {v: tuple(sorted(s)) for v, s in held.items()}, frozenset(overflow), retries)


def split_tokens(tokens: tuple[int, ...], d: int) -> list[tuple[int, ...]]:
    """Cut a token list into ``d`` consecutive pieces of ``ceil(len/d)`` tokens."""
    size = max(1, -(-len(tokens) // d))
    return [tuple(tokens[j * size : (j + 1) * size]) for j in range(d)]


def adjacency_tokens(g: LabeledGraph, rows: Iterable[int]) -> tuple[int, ...]:
    """Flat adjacency list ``x, deg(x), neighbours...`` for the given rows, ids increasing."""
    out: list[int] = []
    for x in sorted(rows):
        nbrs = sorted(g.adj[x])
        out.append(x)
        out.append(len(nbrs))
        out.extend(nbrs)
    return tuple(out)


def parse_adjacency_tokens(tokens: tuple[int, ...]) -> dict[int, tuple[int, ...]]:
    """Inverse of :func:`adjacency_tokens`; raises ``ValueError`` when malformed."""
    rows: dict[int, tuple[int, ...]] = {}
    pos = 0
    last = 0
    n = len(tokens)
    while pos < n:
        if pos + 1 >= n:
            raise ValueError("truncated row")
        x, deg = tokens[pos], tokens[pos + 1]
        if not isinstance(x, int) or not isinstance(deg, int) or x <= last or deg < 0 or pos + 2 + deg > n:
            raise ValueError("bad row header")
        nbrs = tokens[pos + 2 : pos + 2 + deg]
        if any(not isinstance(y, int) or y < 1 for y in nbrs):
            raise ValueError("bad neighbour")
        rows[x] = tuple(nbrs)
        last = x
        pos += 2 + deg
    return rows
