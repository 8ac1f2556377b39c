"""Named example instances, exhaustive micro-family enumeration, and seeded
random instance generation used by the tests and the acceptance suite."""

from __future__ import annotations

import random
from itertools import combinations, combinations_with_replacement

from .canonical import hypergraph_certificate
from .hypergraph import Hypergraph


def path2() -> Hypergraph:
    return Hypergraph.build(
        ["x", "y", "z"],
        [("p1", ["x", "y"]), ("p2", ["y", "z"])],
    )


def hub() -> Hypergraph:
    return Hypergraph.build(
        ["x", "y", "z", "w"],
        [("h1", ["x", "w"]), ("h2", ["y", "w"]), ("h3", ["z", "w"])],
    )


def k4_3() -> Hypergraph:
    """All four size-3 hyperedges on four vertices."""
    verts = ["a", "b", "c", "d"]
    edges = [
        (f"k{i + 1}", vs)
        for i, vs in enumerate(combinations(verts, 3))
    ]
    return Hypergraph.build(verts, edges)


def single_edge(size: int) -> Hypergraph:
    verts = [f"u{i + 1}" for i in range(size)]
    return Hypergraph.build(verts, [("e1", verts)])


def cat4_guest() -> Hypergraph:
    verts = ["t1", "t2", "t3", "t4"]
    return Hypergraph.build(verts, [("e1", verts)])


def cat4_host() -> Hypergraph:
    verts = ["t1", "t2", "t3", "t4", "w1", "w2", "x"]
    edges = [
        ("f1", ["w1", "t1"]),
        ("f2", ["w1", "t2"]),
        ("f3", ["w1", "x"]),
        ("f4", ["x", "w2"]),
        ("f5", ["w2", "t3"]),
        ("f6", ["w2", "t4"]),
    ]
    return Hypergraph.build(verts, edges)


def triangle() -> Hypergraph:
    return Hypergraph.build(
        ["a", "b", "c"],
        [("e1", ["a", "b"]), ("e2", ["b", "c"]), ("e3", ["a", "c"])],
    )


# -- exhaustive micro-families ---------------------------------------------------


def _is_connected(g: Hypergraph) -> bool:
    if not g.vertices:
        return True
    seen = {g.vertices[0]}
    frontier = [g.vertices[0]]
    while frontier:
        v = frontier.pop()
        for _, vs in g.edges:
            if v in vs:
                for u in vs:
                    if u not in seen:
                        seen.add(u)
                        frontier.append(u)
    return len(seen) == len(g.vertices)


def _has_isolated_vertex(g: Hypergraph) -> bool:
    return any(g.degree(v) == 0 for v in g.vertices)


def all_hypergraphs(
    max_vertices: int,
    max_edges: int,
    max_size: int,
    connected_only: bool = False,
    allow_isolated: bool = True,
):
    """Every hypergraph up to isomorphism within the given bounds.

    Edge multisets are enumerated over nonempty vertex subsets (parallel
    hyperedges allowed); duplicates are removed by canonical certificate.
    """
    seen = set()
    out = []
    for nv in range(0, max_vertices + 1):
        verts = [f"v{i + 1}" for i in range(nv)]
        subsets = [
            frozenset(c)
            for size in range(1, min(max_size, nv) + 1)
            for c in combinations(verts, size)
        ]
        for ne in range(0, max_edges + 1):
            for combo in combinations_with_replacement(subsets, ne):
                g = Hypergraph.build(
                    verts, [(f"e{i + 1}", vs) for i, vs in enumerate(combo)])
                if connected_only and not _is_connected(g):
                    continue
                if not allow_isolated and _has_isolated_vertex(g):
                    continue
                cert, _ = hypergraph_certificate(g)
                if cert in seen:
                    continue
                seen.add(cert)
                out.append(g)
    return out


def micro_guests(allow_isolated: bool = True):
    """All guests up to isomorphism with at most 3 vertices, 2 hyperedges of
    size at most 3."""
    return all_hypergraphs(3, 2, 3, allow_isolated=allow_isolated)


def micro_hosts():
    """All connected hosts up to isomorphism with at most 4 vertices and 3
    hyperedges of size at most 3, at least one vertex."""
    return [g for g in all_hypergraphs(4, 3, 3, connected_only=True) if g.vertices]


# -- seeded random instances -----------------------------------------------------


def random_hypergraph(
    rng: random.Random,
    max_vertices: int = 4,
    max_edges: int = 3,
    max_size: int = 3,
) -> Hypergraph:
    nv = rng.randint(1, max_vertices)
    verts = [f"v{i + 1}" for i in range(nv)]
    ne = rng.randint(0, max_edges)
    edges = []
    for i in range(ne):
        size = rng.randint(1, min(max_size, nv))
        vs = rng.sample(verts, size)
        edges.append((f"e{i + 1}", vs))
    return Hypergraph.build(verts, edges)


def random_ordinary_graph(
    rng: random.Random,
    max_vertices: int = 5,
    max_edges: int = 6,
) -> Hypergraph:
    """Random multigraph (every hyperedge has size 2)."""
    nv = rng.randint(2, max_vertices)
    verts = [f"v{i + 1}" for i in range(nv)]
    ne = rng.randint(0, max_edges)
    edges = []
    for i in range(ne):
        u, v = rng.sample(verts, 2)
        edges.append((f"e{i + 1}", [u, v]))
    return Hypergraph.build(verts, edges)


def random_pair(seed: int):
    """A (guest, host) pair sized for the full pipeline/oracle cross-check."""
    rng = random.Random(seed)
    h = random_hypergraph(rng, max_vertices=3, max_edges=2, max_size=3)
    g = random_hypergraph(rng, max_vertices=4, max_edges=3, max_size=3)
    return h, g
