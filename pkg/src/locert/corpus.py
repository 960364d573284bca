"""Seeded graph families: random graphs and hub-blobs joined by low-degree paths.

Identifiers are always a random sample of ``1..3n`` so that no scheme can
lean on a contiguous or ordered layout.
"""

from __future__ import annotations

import random
from itertools import combinations

from .graph import LabeledGraph


def _relabel(n: int, edges: list[tuple[int, int]], rng: random.Random) -> LabeledGraph:
    ids = rng.sample(range(1, 3 * n + 1), n)
    return LabeledGraph(ids, ((ids[a], ids[b]) for a, b in edges))


def random_graph(n: int, p: float, seed: int | str = 0) -> LabeledGraph:
    """G(n, p) with shuffled identifiers."""
    rng = random.Random(f"gnp:{seed}:{n}:{p}")
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    return _relabel(n, edges, rng)


def random_corpus(count: int, n_max: int, seed: int | str = 0, densities: tuple[float, ...] = (0.08, 0.15, 0.3, 0.5)) -> list[LabeledGraph]:
    rng = random.Random(f"corpus:{seed}")
    return [random_graph(rng.randint(1, n_max), rng.choice(densities), f"{seed}:{i}") for i in range(count)]


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: set[tuple[int, int]] = set()

    def add(self, count: int = 1) -> list[int]:
        out = list(range(self.n, self.n + count))
        self.n += count
        return out

    def edge(self, a: int, b: int) -> None:
        if a != b:
            self.edges.add((min(a, b), max(a, b)))

    def path(self, a: int, b: int | None, inner: int) -> list[int]:
        """Chain of ``inner`` fresh vertices from ``a`` (to ``b`` when given)."""
        mid = self.add(inner)
        chain = [a] + mid + ([b] if b is not None else [])
        for x, y in zip(chain, chain[1:]):
            self.edge(x, y)
        return mid


def _blob(b: _Builder, size: int, kind: str, rng: random.Random) -> list[int]:
    vs = b.add(size)
    pairs = list(combinations(vs, 2))
    if kind == "clique":
        drop: set[tuple[int, int]] = set()
    elif kind == "sparse-clique":
        # a few missing edges create short induced paths inside the blob
        drop = set(rng.sample(pairs, rng.randint(1, 3)))
    else:
        drop = {e for e in pairs if rng.random() < 0.12}
    for e in pairs:
        if e not in drop:
            b.edge(*e)
    return vs


def blob_instance(seed: int | str, k: int = 2, blobs: int = 2, n_max: int = 30) -> LabeledGraph:
    """Dense blobs of degree at least ``sqrt(n_max)``, pairwise at distance at
    least ``2k - 1``, joined by low-degree connectors and decorated with pendant
    paths and arms that skirt a blob at a fixed distance.

    The blobs become the ECC_2 classes of the two-layer partition, so long
    induced paths cross several classes and the halos around them.
    """
    rng = random.Random(f"blob:{seed}:{k}:{blobs}:{n_max}")
    b = _Builder()
    size = 2
    while (size - 1) ** 2 < n_max:
        size += 1
    hubs = [_blob(b, size, rng.choices(("clique", "sparse-clique", "dense"), (6, 3, 1))[0], rng) for _ in range(blobs)]
    order = list(range(blobs))
    rng.shuffle(order)
    pairs = list(zip(order, order[1:]))
    if blobs >= 2 and rng.random() < 0.35:
        pairs.append(tuple(rng.sample(range(blobs), 2)))
    for x, y in pairs:
        inner = rng.randint(2 * k - 2, 2 * k - 1)
        if b.n + inner > n_max:
            continue
        b.path(rng.choice(hubs[x]), rng.choice(hubs[y]), inner)
    for _ in range(rng.choice((0, 0, 1, 1, 2, 3))):
        hub = rng.choice(hubs)
        room = n_max - b.n
        if room <= 0:
            break
        if rng.random() < 0.4 and room >= 3:
            # an arm: leave the blob, run at distance d, return through another vertex
            d = rng.randint(1, k - 1) if k > 2 else 1
            span = rng.randint(1, 3)
            if 2 * (d - 1) + span + 1 > room:
                continue
            a, c = rng.sample(hub, 2)
            left = b.path(a, None, d)
            right = b.path(c, None, d)
            b.path(left[-1], right[-1], span - 1)
        else:
            length = min(room, rng.randint(1, k))
            b.path(rng.choice(hub), None, length)
    return _relabel(b.n, sorted(b.edges), rng)


def blob_corpus(count: int, k: int = 2, n_max: int = 30, seed: int | str = 0) -> list[LabeledGraph]:
    return [blob_instance(f"{seed}:{i}", k, 2 + (i % 3 == 2), n_max) for i in range(count)]


def skirt_instance(seed: int | str, k: int = 3, n_max: int = 30) -> LabeledGraph:
    """Two blobs ``A`` and ``B``; arms leave ``B`` and end on a ring at fixed
    distance from it, and low-degree routes join ring vertices to ``A``.

    Long induced paths enter the ring of ``B`` at one vertex and leave it at
    another, which is the situation the two-ECC glue rules are built for.
    """
    rng = random.Random(f"skirt:{seed}:{k}:{n_max}")
    b = _Builder()
    size = 2
    while (size - 1) ** 2 < n_max:
        size += 1
    hub_a = _blob(b, size, "clique", rng)
    hub_b = _blob(b, size, rng.choice(("clique", "sparse-clique", "sparse-clique")), rng)
    d = rng.randint(1, k - 1)
    ring = []
    for _ in range(rng.randint(2, 3)):
        if b.n + d > n_max:
            break
        ring.append(b.path(rng.choice(hub_b), None, d)[-1])
    for x in ring:
        room = n_max - b.n
        roll = rng.random()
        if roll < 0.55 and room >= 2 * k - 1 - d:
            inner = max(0, rng.randint(2 * k - 1 - d, 2 * k + 1 - d) - 1)
            inner = min(inner, room)
            if d + inner + 1 >= 2 * k - 1:
                b.path(x, rng.choice(hub_a), inner)
        elif roll < 0.85 and room >= 1:
            b.path(x, None, min(room, rng.randint(1, k)))
    for _ in range(rng.randint(0, 2)):
        room = n_max - b.n
        if room <= 0:
            break
        b.path(rng.choice(hub_a), None, min(room, rng.randint(1, k)))
    return _relabel(b.n, sorted(b.edges), rng)
