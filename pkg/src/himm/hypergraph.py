"""Hypergraph representation, elementary operations, connectivity, JSON I/O.

Hypergraphs are immutable: vertices are an ordered tuple of opaque string
identifiers, edges an ordered tuple of (edge id, vertex frozenset) pairs.
Multi-hyperedges (distinct ids, identical vertex sets) are allowed, loops
and empty edges are not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    NoSharedVertex,
    NotConnectedByEdge,
    NotSizeTwo,
    NoCommonEndpoint,
    ParseError,
    StepError,
    UnknownEdge,
    UnknownVertex,
    VertexNotInEdge,
    WouldCreateLoop,
    WouldEmptyEdge,
)


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, frozenset[str]], ...]

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ParseError("duplicate vertex identifiers")
        ids = [eid for eid, _ in self.edges]
        if len(set(ids)) != len(ids):
            raise ParseError("duplicate edge identifiers")
        for eid, vs in self.edges:
            if not vs:
                raise ParseError(f"edge {eid!r} is empty")
            if not vs <= vset:
                raise ParseError(f"edge {eid!r} references unknown vertices")

    # -- accessors ---------------------------------------------------------

    @property
    def edge_map(self) -> dict[str, frozenset[str]]:
        return dict(self.edges)

    def edge_set(self, eid: str) -> frozenset[str]:
        for k, vs in self.edges:
            if k == eid:
                return vs
        raise UnknownEdge(eid)

    def has_vertex(self, v: str) -> bool:
        return v in self.vertices

    def incident_edges(self, v: str) -> list[str]:
        if v not in self.vertices:
            raise UnknownVertex(v)
        return [eid for eid, vs in self.edges if v in vs]

    def degree(self, v: str) -> int:
        return len(self.incident_edges(v))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[tuple[str, Iterable[str]]]) -> "Hypergraph":
        return Hypergraph(
            tuple(vertices),
            tuple((eid, frozenset(vs)) for eid, vs in edges),
        )

    def _replace_edges(self, edges: Sequence[tuple[str, frozenset[str]]]) -> "Hypergraph":
        return Hypergraph(self.vertices, tuple(edges))


# -- operation steps ---------------------------------------------------------

OP_KINDS = ("coalesce", "dewet", "lift", "vertexCoalesce", "deleteEdge", "deleteVertex")


@dataclass(frozen=True)
class OperationStep:
    kind: str
    args: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in OP_KINDS:
            raise ParseError(f"unknown operation kind {self.kind!r}")

    def to_obj(self) -> dict:
        return {"op": self.kind, "args": list(self.args)}

    @staticmethod
    def from_obj(obj: Mapping) -> "OperationStep":
        return OperationStep(obj["op"], tuple(obj["args"]))


# -- elementary operations ---------------------------------------------------


def coalesce_edges(g: Hypergraph, e1: str, e2: str) -> Hypergraph:
    """Merge two hyperedges sharing at least one vertex into their union."""
    em = g.edge_map
    if e1 not in em:
        raise UnknownEdge(e1)
    if e2 not in em:
        raise UnknownEdge(e2)
    if e1 == e2:
        raise UnknownEdge(f"coalesce needs two distinct edges, got {e1!r} twice")
    if not em[e1] & em[e2]:
        raise NoSharedVertex(f"{e1} and {e2} share no vertex")
    new_id = f"cl:{e1}+{e2}"
    out = [(k, vs) for k, vs in g.edges if k not in (e1, e2)]
    out.append((new_id, em[e1] | em[e2]))
    return g._replace_edges(out)


def dewet(g: Hypergraph, e: str, v: str) -> Hypergraph:
    """Remove vertex v from edge e; the edge must keep at least one vertex."""
    em = g.edge_map
    if e not in em:
        raise UnknownEdge(e)
    if v not in em[e]:
        raise VertexNotInEdge(f"{v} not in {e}")
    if len(em[e]) < 2:
        raise WouldEmptyEdge(e)
    new_id = f"dw:{e}-{v}"
    out = [(k, vs) if k != e else (new_id, vs - {v}) for k, vs in g.edges]
    return g._replace_edges(out)


def lift(g: Hypergraph, f1: str, f2: str) -> Hypergraph:
    """Replace size-2 edges {v,u},{u,w} sharing exactly u by the edge {v,w}."""
    em = g.edge_map
    for f in (f1, f2):
        if f not in em:
            raise UnknownEdge(f)
        if len(em[f]) != 2:
            raise NotSizeTwo(f)
    shared = em[f1] & em[f2]
    if len(shared) == 0:
        raise NoCommonEndpoint(f"{f1} and {f2} share no endpoint")
    if len(shared) == 2:
        raise WouldCreateLoop(f"{f1} and {f2} have identical endpoints")
    (u,) = shared
    v = next(iter(em[f1] - {u}))
    w = next(iter(em[f2] - {u}))
    new_id = f"lf:{f1}+{f2}"
    out = [(k, vs) for k, vs in g.edges if k not in (f1, f2)]
    out.append((new_id, frozenset((v, w))))
    return g._replace_edges(out)


def vertex_coalesce(g: Hypergraph, u: str, v: str, new_name: str | None = None) -> Hypergraph:
    """Contract two vertices sharing an edge; all edges remain, possibly shrunk."""
    if u not in g.vertices:
        raise UnknownVertex(u)
    if v not in g.vertices:
        raise UnknownVertex(v)
    if u == v:
        raise NotConnectedByEdge(f"{u} equals {v}")
    if not any(u in vs and v in vs for _, vs in g.edges):
        raise NotConnectedByEdge(f"{u} and {v} share no edge")
    z = new_name if new_name is not None else f"vc:{u}+{v}"
    verts = tuple(z if x == u else x for x in g.vertices if x != v)
    edges = []
    for eid, vs in g.edges:
        if u in vs or v in vs:
            vs = (vs - {u, v}) | {z}
        edges.append((eid, vs))
    return Hypergraph(verts, tuple(edges))


def delete_edge(g: Hypergraph, e: str) -> Hypergraph:
    if e not in g.edge_map:
        raise UnknownEdge(e)
    return g._replace_edges([(k, vs) for k, vs in g.edges if k != e])


def delete_vertex(g: Hypergraph, v: str) -> Hypergraph:
    """Delete a vertex together with every edge incident to it."""
    if v not in g.vertices:
        raise UnknownVertex(v)
    return Hypergraph(
        tuple(x for x in g.vertices if x != v),
        tuple((k, vs) for k, vs in g.edges if v not in vs),
    )


@dataclass(frozen=True)
class TransposeResult:
    hypergraph: Hypergraph
    dropped_vertices: tuple[str, ...] = field(default=())


def transpose(g: Hypergraph) -> TransposeResult:
    """Swap the roles of vertices and edges, preserving incidence.

    Vertices of degree 0 would become empty edges and are dropped; they are
    reported in the side list so callers can account for the information loss.
    """
    new_vertices = tuple(eid for eid, _ in g.edges)
    new_edges = []
    dropped = []
    for v in g.vertices:
        inc = frozenset(eid for eid, vs in g.edges if v in vs)
        if inc:
            new_edges.append((v, inc))
        else:
            dropped.append(v)
    return TransposeResult(Hypergraph(new_vertices, tuple(new_edges)), tuple(dropped))


def is_connected_cover(g: Hypergraph, edge_ids: Iterable[str], terminals: Iterable[str]) -> bool:
    """True iff all of `terminals` lie in one connected component of the
    sub-hypergraph spanned by `edge_ids` together with the terminals."""
    em = g.edge_map
    S = list(edge_ids)
    T = list(terminals)
    for e in S:
        if e not in em:
            raise UnknownEdge(e)
    for t in T:
        if t not in g.vertices:
            raise UnknownVertex(t)
    if len(T) <= 1:
        return True
    parent: dict[str, str] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for t in T:
        find(t)
    for e in S:
        vs = list(em[e])
        for x in vs[1:]:
            union(vs[0], x)
    roots = {find(t) for t in T}
    return len(roots) == 1


def apply_step(g: Hypergraph, step: OperationStep) -> Hypergraph:
    if step.kind == "coalesce":
        return coalesce_edges(g, *step.args)
    if step.kind == "dewet":
        return dewet(g, *step.args)
    if step.kind == "lift":
        return lift(g, *step.args)
    if step.kind == "vertexCoalesce":
        return vertex_coalesce(g, *step.args)
    if step.kind == "deleteEdge":
        return delete_edge(g, *step.args)
    if step.kind == "deleteVertex":
        return delete_vertex(g, *step.args)
    raise ParseError(step.kind)


def apply_sequence(g0: Hypergraph, steps: Sequence[OperationStep]) -> Hypergraph:
    """Fold operation steps left to right; failures carry the step index."""
    g = g0
    for i, step in enumerate(steps):
        try:
            g = apply_step(g, step)
        except Exception as exc:  # noqa: BLE001 - wrap with positional context
            raise StepError(i, exc) from exc
    return g


# -- JSON ---------------------------------------------------------------------


def to_obj(g: Hypergraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": eid, "vertices": sorted(vs)} for eid, vs in g.edges],
    }


def to_json(g: Hypergraph) -> str:
    return json.dumps(to_obj(g), indent=2) + "\n"


def from_obj(obj: Mapping) -> Hypergraph:
    try:
        vertices = obj["vertices"]
        edges = [(e["id"], frozenset(e["vertices"])) for e in obj["edges"]]
        for e, raw in zip(edges, obj["edges"]):
            if len(e[1]) != len(raw["vertices"]):
                raise ParseError(f"edge {e[0]!r} repeats a vertex")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed hypergraph JSON: {exc}") from exc
    return Hypergraph(tuple(vertices), tuple(edges))


def from_json(text: str) -> Hypergraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return from_obj(obj)
