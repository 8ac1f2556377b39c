"""Canonical labeling of colored multigraphs by refinement plus backtracking.

The certificate is a deterministic function of the isomorphism class: two
colored multigraphs get equal certificates iff an isomorphism preserving the
initial color strings exists. Also provides hypergraph isomorphism with
vertex markings, implemented on the incidence (factor-graph) encoding.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Mapping, Sequence

from .hypergraph import Hypergraph


def _refine(order: list, adj: dict, colors: dict) -> dict:
    """Iterative neighborhood-label refinement to a stable coloring (ints)."""
    while True:
        sigs = {}
        for n in order:
            nb = tuple(sorted((colors[m], mult) for m, mult in adj[n].items()))
            sigs[n] = (colors[n], nb)
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {n: ranks[sigs[n]] for n in order}
        if new == colors:
            return colors
        colors = new


def _certificate(order: list, adj: dict, init: Mapping, colors: dict):
    pos = {n: i for i, n in enumerate(order)}
    links = []
    for n in order:
        for m, mult in adj[n].items():
            if pos[n] < pos[m]:
                links.append((pos[n], pos[m], mult))
            elif n == m:
                raise ValueError("self-link in canonical input")
    return (tuple(str(init[n]) for n in order), tuple(sorted(links)))


def canonical_labeling(
    nodes: Sequence[Hashable],
    links: Sequence[tuple[Hashable, Hashable]],
    colors: Mapping[Hashable, str],
):
    """Return (certificate, ordering) for a colored multigraph.

    `links` may repeat pairs (multiplicity) but must not contain self-links.
    The ordering lists the nodes in canonical position order; certificates of
    isomorphic inputs are equal and the orderings compose into an isomorphism.
    """
    nodes = list(nodes)
    adj: dict = {n: Counter() for n in nodes}
    for u, v in links:
        if u == v:
            raise ValueError(f"self-link at {u!r}")
        adj[u][v] += 1
        adj[v][u] += 1

    base_rank = {c: i for i, c in enumerate(sorted({str(colors[n]) for n in nodes}))}
    start = {n: base_rank[str(colors[n])] for n in nodes}

    best: list = [None, None]  # certificate, ordering

    def search(cur: dict):
        cur = _refine(nodes, adj, cur)
        cells: dict[int, list] = {}
        for n in nodes:
            cells.setdefault(cur[n], []).append(n)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                if target is None or len(cells[c]) < len(cells[target]):
                    target = c
        if target is None:
            order = sorted(nodes, key=lambda n: cur[n])
            cert = _certificate(order, adj, colors, cur)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            return
        for n in cells[target]:
            child = dict(cur)
            child = {m: c * 2 for m, c in child.items()}
            child[n] -= 1
            search(child)

    search(start)
    return best[0], best[1]


def hypergraph_certificate(g: Hypergraph, vertex_marks: Mapping[str, str] | None = None):
    """Certificate of a hypergraph under incidence-preserving isomorphism.

    Vertices may carry marks (default "original"); edges are unlabeled.
    """
    marks = vertex_marks or {}
    nodes = [("v", v) for v in g.vertices] + [("e", eid) for eid, _ in g.edges]
    colors = {("v", v): "V:" + marks.get(v, "original") for v in g.vertices}
    colors.update({("e", eid): "E" for eid, _ in g.edges})
    links = [(("v", v), ("e", eid)) for eid, vs in g.edges for v in sorted(vs)]
    return canonical_labeling(nodes, links, colors)


def are_isomorphic(
    g1: Hypergraph,
    g2: Hypergraph,
    marks1: Mapping[str, str] | None = None,
    marks2: Mapping[str, str] | None = None,
):
    """Decide mark-preserving hypergraph isomorphism.

    Returns (answer, witness) where the witness maps vertices of g1 to
    vertices of g2 (None on a negative answer).
    """
    c1, o1 = hypergraph_certificate(g1, marks1)
    c2, o2 = hypergraph_certificate(g2, marks2)
    if c1 != c2:
        return False, None
    vmap = {}
    for a, b in zip(o1, o2):
        if a[0] == "v":
            vmap[a[1]] = b[1]
    return True, vmap


def isomorphic_under_map(h: Hypergraph, g: Hypergraph, vmap: Mapping[str, str]) -> bool:
    """Check that a given vertex bijection carries h exactly onto g."""
    if sorted(vmap) != sorted(h.vertices):
        return False
    images = sorted(vmap.values())
    if images != sorted(set(images)) or sorted(g.vertices) != images:
        return False
    want = Counter(frozenset(vmap[v] for v in vs) for _, vs in h.edges)
    have = Counter(vs for _, vs in g.edges)
    return want == have
