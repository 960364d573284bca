import networkx as nx
import pytest

from locert.graph import LabeledGraph


def from_nx(h: nx.Graph, offset: int = 1) -> LabeledGraph:
    """Relabel a networkx graph onto ``offset, offset+1, ...`` in sorted node order."""
    nodes = sorted(h.nodes, key=repr)
    ids = {x: offset + i for i, x in enumerate(nodes)}
    return LabeledGraph(ids.values(), ((ids[a], ids[b]) for a, b in h.edges))


def to_nx(g: LabeledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def path(n: int) -> LabeledGraph:
    return from_nx(nx.path_graph(n))


def cycle(n: int) -> LabeledGraph:
    return from_nx(nx.cycle_graph(n))


def clique(n: int) -> LabeledGraph:
    return from_nx(nx.complete_graph(n))


def star(leaves: int) -> LabeledGraph:
    # center gets identifier 1
    return LabeledGraph(range(1, leaves + 2), ((1, i) for i in range(2, leaves + 2)))


def two_blobs(inner: int) -> LabeledGraph:
    """K_6 on 1..6 and K_6 on 11..16 joined by ``inner`` vertices from 1 to 11."""
    edges = list(clique(6).edges) + [(a + 10, b + 10) for a, b in clique(6).edges]
    chain = [1] + [21 + i for i in range(inner)] + [11]
    edges += list(zip(chain, chain[1:]))
    return LabeledGraph(sorted({x for e in edges for x in e}), edges)


def two_hubs(gap: int, leaves: int = 5) -> LabeledGraph:
    """Hubs 1 and 2 with ``leaves`` pendant vertices each, joined by ``gap`` inner vertices."""
    edges = [(1, 100 + i) for i in range(leaves)] + [(2, 200 + i) for i in range(leaves)]
    chain = [1] + [300 + i for i in range(gap)] + [2]
    edges += list(zip(chain, chain[1:]))
    return LabeledGraph(sorted({x for e in edges for x in e}), edges)


PAW = LabeledGraph([1, 2, 3, 4], [(1, 2), (2, 3), (1, 3), (3, 4)])


@pytest.fixture
def petersen() -> LabeledGraph:
    return from_nx(nx.petersen_graph())


# acceptance lines, filled by test_acceptance and printed after the run
RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
