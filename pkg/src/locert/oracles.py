"""Exponential-time ground truth: embeddings, constrained induced paths, ECCs.

Everything here works on bitmask adjacency over the vertex index of a
:class:`LabeledGraph`; vertex sets passed in and returned are identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Literal, Mapping

from .graph import LabeledGraph

Mode = Literal["induced", "subgraph"]

DEFAULT_EMBED_CAP = 16
DEFAULT_ECC_CAP = 12


class OracleResourceError(RuntimeError):
    """The instance exceeds an oracle's configured size cap."""


# ---------------------------------------------------------------- embeddings


def iter_embeddings(
    g: LabeledGraph,
    h: LabeledGraph,
    mode: Mode = "induced",
    *,
    cap: int = DEFAULT_EMBED_CAP,
    pinned: Mapping[int, int] | None = None,
    domains: Mapping[int, Iterable[int]] | None = None,
    allowed: Iterable[int] | None = None,
    labels: Mapping[int, object] | None = None,
    touch: Iterable[int] | None = None,
) -> Iterator[dict[int, int]]:
    """Yield every injective map ``V(H) -> V(G)`` satisfying the constraints.

    ``pinned`` fixes images; ``domains`` restricts the image of individual
    H-vertices; ``allowed`` restricts all images. Images that carry a label in
    ``labels`` must carry pairwise distinct labels. When ``touch`` is given at
    least one image must lie in it.
    """
    if mode not in ("induced", "subgraph"):
        raise ValueError(f"unknown mode {mode!r}")
    if h.n > cap:
        raise OracleResourceError(f"pattern has {h.n} vertices, cap is {cap}")
    if h.n == 0:
        if touch is None:
            yield {}
        return
    if h.n > g.n:
        return
    gidx = g.index
    gm = g.masks
    full = (1 << g.n) - 1
    base = full if allowed is None else g.mask_of(v for v in allowed if v in gidx)
    hv = list(h.vertices)
    dom: dict[int, int] = {}
    for x in hv:
        d = base
        if domains is not None and x in domains:
            d &= g.mask_of(v for v in domains[x] if v in gidx)
        if pinned is not None and x in pinned:
            p = pinned[x]
            if p not in gidx:
                return
            d &= 1 << gidx[p]
        dom[x] = d
        if not d:
            return
    if any(h.degree(x) > 0 and not _has_degree(dom[x], gm, h.degree(x)) for x in hv):
        return
    order = _search_order(h, dom)
    pos = {x: i for i, x in enumerate(order)}
    earlier_nbrs = [[y for y in h.adj[x] if pos[y] < pos[x]] for x in order]
    earlier_non = [[y for y in order[: pos[x]] if y not in h.adj[x]] for x in order]
    touch_mask = None if touch is None else g.mask_of(v for v in touch if v in gidx)
    lab: list[object | None] | None = None
    if labels is not None:
        lab = [labels.get(v) for v in g.vertices]
    image: dict[int, int] = {}
    verts = g.vertices

    def rec(i: int, used: int, used_labels: frozenset) -> Iterator[dict[int, int]]:
        if i == len(order):
            if touch_mask is None or (used & touch_mask):
                yield {x: verts[image[x]] for x in order}
            return
        x = order[i]
        cand = dom[x] & ~used
        for y in earlier_nbrs[i]:
            cand &= gm[image[y]]
        if mode == "induced":
            for y in earlier_non[i]:
                cand &= ~gm[image[y]]
        while cand:
            low = cand & -cand
            cand ^= low
            j = low.bit_length() - 1
            new_labels = used_labels
            if lab is not None and lab[j] is not None:
                if lab[j] in used_labels:
                    continue
                new_labels = used_labels | {lab[j]}
            image[x] = j
            yield from rec(i + 1, used | low, new_labels)
        image.pop(x, None)

    yield from rec(0, 0, frozenset())


def _has_degree(dom: int, masks: tuple[int, ...], need: int) -> bool:
    while dom:
        low = dom & -dom
        if bin(masks[low.bit_length() - 1]).count("1") >= need:
            return True
        dom ^= low
    return False


def _search_order(h: LabeledGraph, dom: Mapping[int, int]) -> list[int]:
    # start from the most constrained vertex, then grow along edges, preferring
    # vertices with many already-placed neighbours
    remaining = set(h.vertices)
    order: list[int] = []
    while remaining:
        first = min(remaining, key=lambda x: (bin(dom[x]).count("1"), -h.degree(x), x))
        order.append(first)
        remaining.discard(first)
        placed = {first}
        while True:
            frontier = [x for x in remaining if h.adj[x] & placed]
            if not frontier:
                break
            nxt = max(frontier, key=lambda x: (len(h.adj[x] & placed), -bin(dom[x]).count("1"), h.degree(x), -x))
            order.append(nxt)
            placed.add(nxt)
            remaining.discard(nxt)
    return order


def find_induced_embedding(
    g: LabeledGraph,
    h: LabeledGraph,
    mode: Mode = "induced",
    *,
    cap: int = DEFAULT_EMBED_CAP,
    **constraints,
) -> dict[int, int] | None:
    """First embedding of H into G in the given mode, or ``None``."""
    for emb in iter_embeddings(g, h, mode, cap=cap, **constraints):
        return emb
    return None


def contains(g: LabeledGraph, h: LabeledGraph, mode: Mode = "induced", *, cap: int = DEFAULT_EMBED_CAP) -> bool:
    return find_induced_embedding(g, h, mode, cap=cap) is not None


# ---------------------------------------------------------------- induced paths


@dataclass(frozen=True)
class PathConstraint:
    """Constraints on an induced path; ``allowed=None`` means every vertex.

    ``start`` and ``end`` may lie outside ``allowed``. ``avoid_closed_neighborhood_of``
    removes ``N[x]`` from the allowed set (start and end stay exempt).
    ``two_path_partner`` switches to the two-path quantity: the largest total
    vertex count of two disjoint, mutually anticomplete induced paths starting
    at ``start`` and at the partner. ``touch`` lists vertex sets that must each
    meet the path. At most ``special_budget`` vertices of ``special`` may be used.
    ``target`` lets the search stop as soon as a path of that many vertices is found.
    """

    start: int | None = None
    end: int | None = None
    allowed: frozenset[int] | None = None
    avoid_closed_neighborhood_of: int | None = None
    two_path_partner: int | None = None
    touch: tuple[frozenset[int], ...] = ()
    special: frozenset[int] = field(default_factory=frozenset)
    special_budget: int | None = None
    target: int | None = None


@dataclass(frozen=True)
class PathResult:
    count: int
    path: tuple[int, ...]
    second: tuple[int, ...] = ()


class _Found(Exception):
    pass


_NEG = -(10**9)


def longest_induced_path(g: LabeledGraph, c: PathConstraint = PathConstraint()) -> PathResult:
    """Largest vertex count of an induced path of ``g`` obeying ``c`` (0 if none)."""
    idx = g.index
    for v in (c.start, c.end, c.two_path_partner, c.avoid_closed_neighborhood_of):
        if v is not None and v not in idx:
            return PathResult(0, ())
    allowed = ((1 << g.n) - 1) if c.allowed is None else g.mask_of(v for v in c.allowed if v in idx)
    if c.avoid_closed_neighborhood_of is not None:
        x = idx[c.avoid_closed_neighborhood_of]
        allowed &= ~(g.masks[x] | (1 << x))
    touch = tuple(g.mask_of(v for v in t if v in idx) for t in c.touch)
    special = g.mask_of(v for v in c.special if v in idx)
    if c.two_path_partner is not None:
        if c.start is None:
            raise ValueError("two-path search needs a start")
        return _two_paths(g, idx[c.start], idx[c.two_path_partner], allowed, c.target)
    start = None if c.start is None else idx[c.start]
    end = None if c.end is None else idx[c.end]
    if start is None:
        # paths are undirected: a path ending at ``end`` is one starting there
        start, end = end, None
    count, path = _longest(g.masks, allowed, start, end, touch, special, c.special_budget, c.target)
    return PathResult(count, tuple(g.vertices[i] for i in path))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _longest(
    masks: tuple[int, ...],
    allowed: int,
    start: int | None,
    end: int | None,
    touch: tuple[int, ...],
    special: int,
    budget: int | None,
    target: int | None,
) -> tuple[int, list[int]]:
    """Bitmask DFS with memo on (last, blocked, touched, specials used).

    ``blocked`` is the path plus the closed neighbourhoods of every path vertex
    except the last one, so candidates are the neighbours of the last vertex
    outside it.
    """
    all_touched = (1 << len(touch)) - 1
    if end is not None:
        interior = allowed & ~(1 << end)
        if start is not None:
            interior &= ~(1 << start)
    else:
        interior = allowed if start is None else allowed & ~(1 << start)
    memo: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    stack: list[int] = []

    def touched_by(v: int, t: int) -> int:
        for b, tm in enumerate(touch):
            if tm >> v & 1:
                t |= 1 << b
        return t

    def ext(last: int, blocked: int, t: int, used: int) -> int:
        """Most additional vertices completing a valid path, or _NEG."""
        key = (last, blocked, t, used)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        if end is not None:
            if last == end:
                val = 0 if t == all_touched else _NEG
                memo[key] = (val, -1)
                return val
            base = _NEG
        else:
            base = 0 if t == all_touched else _NEG
        best, choice = base, -1
        nb = blocked | masks[last] | (1 << last)
        cand = masks[last] & ~blocked
        endbit = 0 if end is None else (cand >> end & 1) << end
        cand = (cand & interior) | endbit
        for x in _bits(cand):
            u2 = used
            if special >> x & 1:
                u2 += 1
                if budget is not None and u2 > budget:
                    continue
            stack.append(x)
            r = ext(x, nb | (1 << x), touched_by(x, t), u2)
            stack.pop()
            if r != _NEG and r + 1 > best:
                best, choice = r + 1, x
        memo[key] = (best, choice)
        if best != _NEG and target is not None and len(stack) + best >= target:
            raise _Found(key)
        return best

    def follow(prefix: list[int], state: tuple[int, int, int, int]) -> list[int]:
        path = list(prefix)
        last, blocked, t, used = state
        while True:
            _, choice = memo[(last, blocked, t, used)]
            if choice < 0:
                return path
            blocked = blocked | masks[last] | (1 << last) | (1 << choice)
            used += 1 if special >> choice & 1 else 0
            t = touched_by(choice, t)
            last = choice
            path.append(choice)

    best_count, best_path = 0, []
    starts = [start] if start is not None else list(_bits(interior))
    for s in starts:
        u0 = 1 if special >> s & 1 else 0
        if budget is not None and u0 > budget:
            continue
        state = (s, 1 << s, touched_by(s, 0), u0)
        stack[:] = [s]
        try:
            r = ext(*state)
        except _Found as found:
            path = follow(stack, found.args[0])
            return len(path), path
        if r != _NEG and r + 1 > best_count:
            best_count, best_path = r + 1, follow([s], state)
    return best_count, best_path


def _two_paths(g: LabeledGraph, s: int, p: int, allowed: int, target: int | None) -> PathResult:
    masks = g.masks
    if s == p or masks[s] >> p & 1:
        return PathResult(0, ())
    closed_p = masks[p] | (1 << p)
    first_allowed = allowed & ~closed_p
    second_cache: dict[int, tuple[int, list[int]]] = {}
    best = (0, [], [])

    def second(forbidden: int) -> tuple[int, list[int]]:
        hit = second_cache.get(forbidden)
        if hit is None:
            hit = _longest(masks, allowed & ~forbidden, p, None, (), 0, None, None)
            second_cache[forbidden] = hit
        return hit

    # enumerate every induced path from s that stays anticomplete to p
    stack: list[tuple[list[int], int, int]] = [([s], 1 << s, 1 << s | masks[s])]
    while stack:
        path, blocked, closed = stack.pop()
        c2, p2 = second(closed)
        if c2 and len(path) + c2 > best[0]:
            best = (len(path) + c2, list(path), p2)
            if target is not None and best[0] >= target:
                break
        last = path[-1]
        cand = masks[last] & ~blocked & first_allowed
        nb = blocked | masks[last] | (1 << last)
        for x in _bits(cand):
            stack.append((path + [x], nb | (1 << x), closed | masks[x] | (1 << x)))
    verts = g.vertices
    return PathResult(best[0], tuple(verts[i] for i in best[1]), tuple(verts[i] for i in best[2]))


def has_induced_path(g: LabeledGraph, m: int) -> bool:
    """Whether ``g`` has an induced path on at least ``m`` vertices."""
    if m <= 0:
        return True
    return longest_induced_path(g, PathConstraint(target=m)).count >= m


def is_induced_path(g: LabeledGraph, path: Iterable[int]) -> bool:
    p = list(path)
    if len(set(p)) != len(p) or any(v not in g for v in p):
        return False
    pos = {v: i for i, v in enumerate(p)}
    for i, v in enumerate(p):
        for w in g.adj[v]:
            j = pos.get(w)
            if j is not None and abs(i - j) != 1:
                return False
        if i + 1 < len(p) and not g.has_edge(v, p[i + 1]):
            return False
    return True


# ---------------------------------------------------------------- ECC reference


def reference_layer(deg: int, n: int, eps: Fraction | str) -> int:
    """Layer index of a vertex of the given degree, by direct search."""
    if eps == "log":
        top = max(1, _ceil_log2(n))
        i = 1
        while i < top and deg >= 2**i:
            i += 1
        return i
    eps = Fraction(eps)
    top = -(-eps.denominator // eps.numerator)
    i = 1
    # deg >= n^(i*eps)  <=>  deg^q >= n^(i*p)
    while i < top and deg ** eps.denominator >= n ** (i * eps.numerator):
        i += 1
    return i


def _ceil_log2(n: int) -> int:
    return 0 if n <= 1 else (n - 1).bit_length()


def ecc_reference(
    g: LabeledGraph,
    k: int,
    eps: Fraction | str,
    i: int,
    *,
    cap: int = DEFAULT_ECC_CAP,
    layer_of: Callable[[int], int] | None = None,
) -> list[frozenset[int]]:
    """ECC_i classes by enumerating every simple path between H_i vertices.

    Two H_i vertices are linked when some path joining them has no run of
    ``2k - 2`` consecutive vertices of ``L_{i-1}``; classes are the closure.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if g.n > cap:
        raise OracleResourceError(f"graph has {g.n} vertices, cap is {cap}")
    if layer_of is None:
        layer_of = lambda v: reference_layer(g.degree(v), g.n, eps)  # noqa: E731
    high = [v for v in g.vertices if layer_of(v) >= i]
    is_low = {v: layer_of(v) <= i - 1 for v in g.vertices}
    limit = 2 * k - 2
    parent = {v: v for v in high}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    high_set = set(high)
    # once every H_i vertex is in one class no further path can change the answer
    classes = [len(high)]
    for u in high:
        if classes[0] <= 1:
            break
        on_path = {u}

        def dfs(x: int, run: int) -> bool:
            for y in g.adj[x]:
                if y in on_path:
                    continue
                r = run + 1 if is_low[y] else 0
                if r >= limit:
                    continue
                if y in high_set:
                    a, b = find(u), find(y)
                    if a != b:
                        parent[a] = b
                        classes[0] -= 1
                        if classes[0] == 1:
                            return True
                on_path.add(y)
                done = dfs(y, r)
                on_path.discard(y)
                if done:
                    return True
            return False

        dfs(u, 0)
    classes: dict[int, set[int]] = {}
    for v in high:
        classes.setdefault(find(v), set()).add(v)
    return sorted((frozenset(c) for c in classes.values()), key=min)
