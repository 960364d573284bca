"""Immutable simple graphs with positive integer identifiers, distances and views."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping


class GraphParseError(ValueError):
    """Raised when an edge-list document is malformed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(message if line is None else f"{message} at line {line}")


Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """Simple undirected graph over distinct positive integer identifiers.

    The adjacency map is frozen at construction; every derived structure is
    cached, so instances must be treated as values.
    """

    __slots__ = ("_adj", "_vertices", "__dict__")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Edge] = ()) -> None:
        adj: dict[int, set[int]] = {}
        for v in vertices:
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"identifier must be a positive integer, got {v!r}")
            adj.setdefault(v, set())
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on {u}")
            for x in (u, v):
                if not isinstance(x, int) or x < 1:
                    raise ValueError(f"identifier must be a positive integer, got {x!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._vertices: tuple[int, ...] = tuple(sorted(adj))
        self._adj: dict[int, frozenset[int]] = {v: frozenset(adj[v]) for v in self._vertices}

    @classmethod
    def from_adjacency(cls, adj: Mapping[int, Iterable[int]]) -> "LabeledGraph":
        edges = [(u, v) for u, nbrs in adj.items() for v in nbrs if u < v]
        return cls(adj.keys(), edges)

    # basic accessors

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def adj(self) -> Mapping[int, frozenset[int]]:
        return self._adj

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted((u, v) for u in self._vertices for v in self._adj[u] if u < v))

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._vertices == other._vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self._vertices, self.edges))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.m})"

    # indexing for bitmask algorithms

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self._vertices)}

    @cached_property
    def masks(self) -> tuple[int, ...]:
        idx = self.index
        out = []
        for v in self._vertices:
            mask = 0
            for w in self._adj[v]:
                mask |= 1 << idx[w]
            out.append(mask)
        return tuple(out)

    def mask_of(self, vs: Iterable[int]) -> int:
        idx = self.index
        mask = 0
        for v in vs:
            mask |= 1 << idx[v]
        return mask

    def ids_of(self, mask: int) -> list[int]:
        out = []
        verts = self._vertices
        while mask:
            low = mask & -mask
            out.append(verts[low.bit_length() - 1])
            mask ^= low
        return out

    # distances

    def distances_from(self, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
        """Breadth-first distances from a vertex set, optionally truncated at ``limit``."""
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for s in sources:
            if s not in self._adj:
                raise KeyError(f"unknown vertex {s}")
            if s not in dist:
                dist[s] = 0
                queue.append(s)
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if limit is not None and dx >= limit:
                continue
            for y in self._adj[x]:
                if y not in dist:
                    dist[y] = dx + 1
                    queue.append(y)
        return dist

    @cached_property
    def _all_pairs(self) -> dict[int, dict[int, int]]:
        return {v: self.distances_from([v]) for v in self._vertices}

    def distance(self, u: int, v: int) -> float:
        return self._all_pairs[u].get(v, float("inf"))

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        seen: set[int] = set()
        comps = []
        for v in self._vertices:
            if v in seen:
                continue
            comp = frozenset(self.distances_from([v]))
            seen |= comp
            comps.append(comp)
        return tuple(comps)

    @cached_property
    def component_of(self) -> dict[int, frozenset[int]]:
        return {v: comp for comp in self.components for v in comp}

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    # derived graphs

    def induced_subgraph(self, vs: Iterable[int]) -> "LabeledGraph":
        keep = set(vs)
        missing = keep - self._adj.keys()
        if missing:
            raise KeyError(f"unknown vertices {sorted(missing)}")
        return LabeledGraph(keep, [(u, v) for u, v in self.edges if u in keep and v in keep])

    def relabel(self, mapping: Mapping[int, int]) -> "LabeledGraph":
        return LabeledGraph(
            (mapping[v] for v in self._vertices),
            ((mapping[u], mapping[v]) for u, v in self.edges),
        )


def induced_subgraph(g: LabeledGraph, s: Iterable[int]) -> LabeledGraph:
    return g.induced_subgraph(s)


# text format


def parse_graph(text: str) -> LabeledGraph:
    """Parse an edge-list document.

    The first non-blank, non-comment line is either ``n m`` or ``p edge n m``;
    it is followed by ``m`` lines ``u v`` (an optional leading ``e`` is
    tolerated). A line holding a single identifier declares an isolated
    vertex. When the header announces more vertices than were named, the
    missing identifiers are the smallest unused positive integers, so ``1 0``
    is a single isolated vertex with identifier 1.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    declared: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c ", "#")) or line == "c":
            continue
        parts = line.split()
        if header is None:
            if parts[0] == "p":
                if len(parts) != 4:
                    raise GraphParseError("malformed header", lineno)
                parts = parts[2:]
            if len(parts) != 2:
                raise GraphParseError("malformed header", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphParseError("malformed header", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise GraphParseError("malformed header", lineno)
            continue
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) == 1:
            try:
                x = int(parts[0])
            except ValueError:
                raise GraphParseError("malformed line", lineno) from None
            if x < 1:
                raise GraphParseError("non-positive identifier", lineno)
            declared.add(x)
            continue
        if len(parts) != 2:
            raise GraphParseError("malformed line", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("malformed line", lineno) from None
        if u < 1 or v < 1:
            raise GraphParseError("non-positive identifier", lineno)
        if u == v:
            raise GraphParseError("self-loop", lineno)
        e = norm_edge(u, v)
        if e in seen:
            raise GraphParseError("duplicate edge", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise GraphParseError("missing header")
    n, m = header
    if len(edges) != m:
        raise GraphParseError(f"header announces {m} edges but {len(edges)} were given")
    ids = {x for e in edges for x in e} | declared
    if len(ids) > n:
        raise GraphParseError(f"header announces {n} vertices but {len(ids)} identifiers were used")
    fill = 1
    while len(ids) < n:
        if fill not in ids:
            ids.add(fill)
        fill += 1
    return LabeledGraph(ids, edges)


def serialize_graph(g: LabeledGraph) -> str:
    """Canonical edge-list text: header, edges sorted lexicographically, then
    one single-identifier line per isolated vertex."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    lines.extend(str(v) for v in g.vertices if not g.adj[v])
    return "\n".join(lines) + "\n"


# views


@dataclass(frozen=True)
class RadiusView:
    """What a vertex sees at radius ``radius``.

    ``dist`` maps every visible vertex to its distance from the center, and
    ``adj`` holds the visible edges: all edges among visible vertices except
    those joining two vertices at distance exactly ``radius``.
    """

    center: int
    radius: int
    dist: Mapping[int, int]
    adj: Mapping[int, frozenset[int]]
    certificates: Mapping[int, Any] = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.dist)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(norm_edge(u, v) for u, nbrs in self.adj.items() for v in nbrs if u < v)

    def within(self, d: int) -> list[int]:
        return [v for v, dv in self.dist.items() if dv <= d]

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        """Degree of ``v``; exact only when ``dist[v] < radius``."""
        if self.dist[v] >= self.radius:
            raise ValueError(f"degree of {v} is not determined by the view")
        return len(self.adj[v])

    def cert(self, v: int) -> Any:
        return self.certificates[v]


@dataclass(frozen=True)
class ViewSkeleton:
    """Certificate-free part of a view; reusable across assignments."""

    center: int
    radius: int
    dist: Mapping[int, int]
    adj: Mapping[int, frozenset[int]]

    def with_certificates(self, assignment: Mapping[int, Any] | None) -> RadiusView:
        certs = {} if assignment is None else {v: assignment[v] for v in self.dist}
        return RadiusView(self.center, self.radius, self.dist, self.adj, certs)


def view_skeleton(g: LabeledGraph, v: int, d: int) -> ViewSkeleton:
    if v not in g:
        raise KeyError(f"unknown vertex {v}")
    if d < 0:
        raise ValueError("radius must be nonnegative")
    dist = g.distances_from([v], limit=d)
    adj: dict[int, frozenset[int]] = {}
    for x, dx in dist.items():
        if dx < d:
            adj[x] = frozenset(y for y in g.adj[x])
        else:
            adj[x] = frozenset(y for y in g.adj[x] if y in dist and dist[y] < d)
    return ViewSkeleton(v, d, dist, adj)


def radius_view(g: LabeledGraph, v: int, d: int, assignment: Mapping[int, Any] | None = None) -> RadiusView:
    """The view of ``v`` at radius ``d`` with optional certificates attached."""
    return view_skeleton(g, v, d).with_certificates(assignment)
