"""Ordinary labeled multigraphs: factor graphs, M-generalised factor graphs,
densification, subdivision/smoothing, default parameters, DOT export."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .canonical import canonical_labeling
from .errors import LoopCreated, ParseError, UnknownNode
from .hypergraph import Hypergraph

ROLE_VERTEX = "vertex"
ROLE_EDGE = "edge"
ROLE_ADDED = "added"


@dataclass(frozen=True)
class GraphNode:
    name: str
    role: str
    origin: str | None = None
    dup: int | None = None


@dataclass(frozen=True)
class LabeledGraph:
    nodes: tuple[GraphNode, ...]
    links: tuple[tuple[str, str], ...]
    pinned: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise ParseError("duplicate node names")
        known = set(names)
        for u, v in self.links:
            if u == v:
                raise ParseError(f"self-link at {u!r}")
            if u not in known or v not in known:
                raise ParseError(f"link ({u!r},{v!r}) references unknown node")
        if not self.pinned <= known:
            raise ParseError("pinned set references unknown node")

    @property
    def node_map(self) -> dict[str, GraphNode]:
        return {n.name: n for n in self.nodes}

    def adjacency(self) -> dict[str, Counter]:
        adj: dict[str, Counter] = {n.name: Counter() for n in self.nodes}
        for u, v in self.links:
            adj[u][v] += 1
            adj[v][u] += 1
        return adj

    def degree(self, name: str) -> int:
        return sum(1 for u, v in self.links if name in (u, v))

    def certificate(self, color: Callable[[GraphNode], str] | None = None):
        """Canonical certificate; default colors: role plus pinned flag."""
        if color is None:
            def color(n):  # noqa: ANN001
                return f"{n.role}|{'pin' if n.name in self.pinned else '-'}"
        colors = {n.name: color(n) for n in self.nodes}
        cert, _ = canonical_labeling([n.name for n in self.nodes], self.links, colors)
        return cert


def factor_graph(g: Hypergraph) -> LabeledGraph:
    """Bipartite incidence graph: one node per vertex, one per hyperedge."""
    return m_factor_graph(g, 1)


def m_factor_graph(g: Hypergraph, m: int) -> LabeledGraph:
    """Factor graph with each vertex of g replaced by m interchangeable copies."""
    if m < 1:
        raise ParseError("M must be >= 1")
    nodes = [GraphNode(f"v:{v}#{i}", ROLE_VERTEX, v, i) for v in g.vertices for i in range(1, m + 1)]
    nodes += [GraphNode(f"e:{eid}", ROLE_EDGE, eid) for eid, _ in g.edges]
    links = []
    for eid, vs in g.edges:
        for v in sorted(vs):
            for i in range(1, m + 1):
                links.append((f"v:{v}#{i}", f"e:{eid}"))
    return LabeledGraph(tuple(nodes), tuple(links))


def densify(x: LabeledGraph, targets: Iterable[str], L: int) -> LabeledGraph:
    """Attach a K_L clique to each target node (the target is the identified
    clique member); added nodes link only within their own clique."""
    targets = list(targets)
    if not targets:
        raise UnknownNode("densify needs at least one target")
    if L < 2:
        raise ParseError("L must be >= 2 for literal densification")
    known = {n.name for n in x.nodes}
    for t in targets:
        if t not in known:
            raise UnknownNode(t)
    nodes = list(x.nodes)
    links = list(x.links)
    for t in targets:
        clique = [t]
        for j in range(1, L):
            name = f"k:{t}:{j}"
            nodes.append(GraphNode(name, ROLE_ADDED, t))
            clique.append(name)
        for a in range(len(clique)):
            for b in range(a + 1, len(clique)):
                links.append((clique[a], clique[b]))
    return LabeledGraph(tuple(nodes), tuple(links), x.pinned)


@dataclass(frozen=True)
class Params:
    M: int
    L: int
    mode: str = "pin"  # "pin" or "literalDensify"

    def __post_init__(self):
        if self.M < 1:
            raise ParseError("M must be >= 1")
        if self.mode not in ("pin", "literalDensify"):
            raise ParseError(f"unknown mode {self.mode!r}")
        if self.mode == "literalDensify" and self.L < 2:
            raise ParseError("L must be >= 2 in literalDensify mode")


def default_params(h: Hypergraph, g: Hypergraph, mode: str = "pin") -> Params:
    """Conservative duplicate/clique sizes: each hyperedge's division tree can
    cross a host vertex's duplicate set once per tree link, so M exceeds the
    total link budget; L exceeds M times the generalised factor graph size."""
    m = 1 + sum(max(2 * len(vs) - 2, 1) for _, vs in h.edges)
    L = 1 + m * (m * len(g.vertices) + len(g.edges))
    return Params(M=m, L=L, mode=mode)


def subdivide(x: LabeledGraph, link_index: int) -> LabeledGraph:
    """Insert one degree-2 added node on the link at the given index."""
    if not 0 <= link_index < len(x.links):
        raise UnknownNode(f"no link at index {link_index}")
    u, v = x.links[link_index]
    existing = {n.name for n in x.nodes}
    k = 0
    while f"s:{k}" in existing:
        k += 1
    w = f"s:{k}"
    links = list(x.links)
    links.pop(link_index)
    links += [(u, w), (w, v)]
    return LabeledGraph(x.nodes + (GraphNode(w, ROLE_ADDED),), tuple(links), x.pinned)


def smooth_reduce(
    x: LabeledGraph,
    protected: Iterable[str],
    pick: Callable[[list[str]], str] | None = None,
) -> LabeledGraph:
    """Remove unprotected degree-2 nodes, joining their neighbors, until none
    remain. The result is order-independent; `pick` only selects which eligible
    node goes next (tests use it to randomize). A degree-2 node whose two link
    ends coincide would create a loop and is rejected."""
    protected = set(protected)
    known = {n.name for n in x.nodes}
    if not protected <= known:
        raise UnknownNode(sorted(protected - known)[0])
    adj: dict[str, Counter] = {n.name: Counter() for n in x.nodes}
    for u, v in x.links:
        adj[u][v] += 1
        adj[v][u] += 1

    def eligible() -> list[str]:
        return sorted(
            n for n in adj
            if n not in protected and sum(adj[n].values()) == 2
        )

    while True:
        cand = eligible()
        if not cand:
            break
        n = pick(cand) if pick is not None else cand[0]
        ends = []
        for m, mult in adj[n].items():
            ends.extend([m] * mult)
        a, b = ends
        if a == b:
            raise LoopCreated(n)
        for m in list(adj[n]):
            del adj[m][n]
        del adj[n]
        adj[a][b] += 1
        adj[b][a] += 1

    keep = tuple(n for n in x.nodes if n.name in adj)
    links = []
    for u in sorted(adj):
        for v, mult in sorted(adj[u].items()):
            if u < v:
                links.extend([(u, v)] * mult)
    return LabeledGraph(keep, tuple(links), x.pinned & set(adj))


# -- serialization ------------------------------------------------------------


def graph_to_obj(x: LabeledGraph) -> dict:
    return {
        "nodes": [
            {"name": n.name, "role": n.role, "origin": n.origin, "dup": n.dup,
             "pinned": n.name in x.pinned}
            for n in x.nodes
        ],
        "links": [[u, v] for u, v in x.links],
    }


def graph_to_json(x: LabeledGraph) -> str:
    return json.dumps(graph_to_obj(x), indent=2) + "\n"


def graph_from_obj(obj: Mapping) -> LabeledGraph:
    nodes = tuple(
        GraphNode(n["name"], n["role"], n.get("origin"), n.get("dup"))
        for n in obj["nodes"]
    )
    pinned = frozenset(n["name"] for n in obj["nodes"] if n.get("pinned"))
    links = tuple((u, v) for u, v in obj["links"])
    return LabeledGraph(nodes, links, pinned)


def to_dot(x: LabeledGraph, name: str = "g") -> str:
    """Deterministic DOT rendering for human inspection (never parsed back)."""
    lines = [f"graph {name} {{"]
    for n in sorted(x.nodes, key=lambda n: n.name):
        if n.role == ROLE_VERTEX:
            label = f"v:{n.origin}#{n.dup}" if n.dup is not None else f"v:{n.origin}"
            shape = "circle"
        elif n.role == ROLE_EDGE:
            label = f"e:{n.origin}"
            shape = "box"
        else:
            label = n.name
            shape = "point"
        extra = ' style=bold' if n.name in x.pinned else ""
        lines.append(f'  "{n.name}" [shape={shape} label="{label}"{extra}];')
    for u, v in sorted(x.links):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
