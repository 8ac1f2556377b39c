"""Immersion decision pipeline, brute-force oracle, witness handling.

The pipeline enumerates the division set of the guest, then searches each
division pattern for a pinned embedding in the generalised factor graph of
the host. A positive answer is projected down to an immersion witness:
injective vertex map, per-hyperedge edge-disjoint connected covers, and a
replay sequence of coalesce/dewet steps that reconstructs the guest image.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .divisions import DivisionPattern, division_set
from .embedding import EmbeddingWitness, find_embedding
from .errors import ProjectionFailure, StepError
from .hypergraph import (
    Hypergraph,
    OperationStep,
    apply_sequence,
    is_connected_cover,
    transpose,
)
from .labeled import (
    ROLE_ADDED,
    ROLE_EDGE,
    ROLE_VERTEX,
    LabeledGraph,
    Params,
    default_params,
    densify,
    m_factor_graph,
)


@dataclass(frozen=True)
class EdgeSubgraph:
    edges: tuple[str, ...]
    extra_vertices: tuple[str, ...]


@dataclass(frozen=True)
class ImmersionWitness:
    vertex_map: dict
    edge_subgraphs: dict  # hyperedge id -> EdgeSubgraph
    replay: tuple[OperationStep, ...]


@dataclass
class Decision:
    answer: str  # "yes" | "no" | "unknown"
    witness: ImmersionWitness | None = None
    stats: dict = field(default_factory=dict)


class _Budget(Exception):
    pass


# -- replay construction -------------------------------------------------------


def build_replay(
    h: Hypergraph,
    g: Hypergraph,
    vertex_map: dict,
    edge_subgraphs: dict,
) -> tuple[OperationStep, ...]:
    """Coalesce each hyperedge's cover into one edge, then dewet it down to
    the image vertex set. Hyperedges with an empty cover (single-vertex ones
    realized by a bare vertex) contribute no steps."""
    gm = g.edge_map
    steps: list[OperationStep] = []
    for eid, vs in h.edges:
        sub: EdgeSubgraph = edge_subgraphs[eid]
        if not sub.edges:
            continue
        remaining = set(sub.edges)
        cur = min(remaining)
        remaining.discard(cur)
        cur_vs = set(gm[cur])
        while remaining:
            adjacent = sorted(e for e in remaining if gm[e] & cur_vs)
            if not adjacent:
                raise ProjectionFailure(
                    f"cover of {eid!r} is not connected: {sorted(remaining)}")
            nxt = adjacent[0]
            steps.append(OperationStep("coalesce", (cur, nxt)))
            cur_vs |= gm[nxt]
            cur = f"cl:{cur}+{nxt}"
            remaining.discard(nxt)
        targets = {vertex_map[v] for v in vs}
        if not targets <= cur_vs:
            raise ProjectionFailure(
                f"cover of {eid!r} misses image vertices {sorted(targets - cur_vs)}")
        for v in sorted(cur_vs - targets):
            steps.append(OperationStep("dewet", (cur, v)))
            cur = f"dw:{cur}-{v}"
    return tuple(steps)


# -- witness verification ------------------------------------------------------


def immersion_violations(h: Hypergraph, g: Hypergraph, w: ImmersionWitness) -> list[str]:
    """Every violated invariant of an immersion witness, as one line each."""
    out: list[str] = []
    gm = g.edge_map
    vm = w.vertex_map
    if sorted(vm) != sorted(h.vertices):
        out.append("vertexMap domain is not exactly the guest vertex set")
        return out
    images = list(vm.values())
    if len(set(images)) != len(images):
        out.append("vertexMap is not injective")
    bad = sorted(set(images) - set(g.vertices))
    if bad:
        out.append(f"vertexMap images not in host: {bad}")
    if out:
        return out
    if sorted(w.edge_subgraphs) != sorted(eid for eid, _ in h.edges):
        out.append("edgeSubgraphs keys are not exactly the guest edge ids")
        return out
    seen_edges: set[str] = set()
    for eid, vs in h.edges:
        sub: EdgeSubgraph = w.edge_subgraphs[eid]
        unknown = sorted(set(sub.edges) - set(gm))
        if unknown:
            out.append(f"subgraph of {eid!r} uses unknown host edges {unknown}")
            continue
        if len(set(sub.edges)) != len(sub.edges):
            out.append(f"subgraph of {eid!r} repeats a host edge")
        overlap = sorted(set(sub.edges) & seen_edges)
        if overlap:
            out.append(f"edge-disjointness violated: {eid}: host edges {overlap} reused")
        seen_edges.update(sub.edges)
        targets = {vm[v] for v in vs}
        if not sub.edges:
            if len(vs) != 1:
                out.append(f"subgraph of {eid!r} is empty but the edge has size {len(vs)}")
            continue
        covered = set().union(*(gm[e] for e in sub.edges))
        missing = sorted(targets - covered)
        if missing:
            out.append(f"subgraph of {eid!r} misses image vertices {missing}")
        if not is_connected_cover(g, sub.edges, sorted(targets)):
            out.append(f"subgraph of {eid!r} is not connected")
        want_extra = sorted(covered - targets)
        if sorted(sub.extra_vertices) != want_extra:
            out.append(f"extraVertices of {eid!r} do not match the used edges")
    if out:
        return out
    # replay on the sub-hypergraph induced by the used elements
    touched = set(images)
    for eid in seen_edges:
        touched |= gm[eid]
    sub_g = Hypergraph(
        tuple(v for v in g.vertices if v in touched),
        tuple((eid, vs) for eid, vs in g.edges if eid in seen_edges),
    )
    try:
        final = apply_sequence(sub_g, w.replay)
    except StepError as exc:
        out.append(f"replay failed: {exc}")
        return out
    want = Counter(
        frozenset(vm[v] for v in vs)
        for eid, vs in h.edges
        if w.edge_subgraphs[eid].edges
    )
    have = Counter(vs for _, vs in final.edges)
    if want != have:
        out.append("replay result does not match the guest image")
    return out


def verify_immersion(h: Hypergraph, g: Hypergraph, w: ImmersionWitness) -> bool:
    return not immersion_violations(h, g, w)


# -- projection from an embedding witness --------------------------------------


def _host_vertex_origin(host: LabeledGraph, name: str) -> str:
    info = host.node_map[name]
    if info.role == ROLE_VERTEX:
        return info.origin
    if info.role == ROLE_ADDED:
        target = host.node_map[info.origin]
        if target.role == ROLE_VERTEX:
            return target.origin
    raise ProjectionFailure(f"node {name!r} does not project to a host vertex")


def extract_witness(
    h: Hypergraph,
    g: Hypergraph,
    member: DivisionPattern,
    host: LabeledGraph,
    ew: EmbeddingWitness,
) -> ImmersionWitness:
    """Project an embedding of a division pattern down to an immersion witness."""
    node_info = host.node_map
    vertex_map: dict[str, str] = {}
    for v in h.vertices:
        img = ew.node_map[f"t:{v}"]
        vertex_map[v] = _host_vertex_origin(host, img)
    if len(set(vertex_map.values())) != len(vertex_map):
        raise ProjectionFailure("projected vertex map is not injective")

    edge_nodes: dict[str, set[str]] = {eid: set() for eid, _ in h.edges}

    def absorb(eid: str, name: str):
        info = node_info[name]
        if info.role == ROLE_EDGE:
            edge_nodes[eid].add(info.origin)

    path_by_link = dict(ew.paths)
    for li, owner in enumerate(member.link_owners):
        for name in path_by_link[li]:
            absorb(owner, name)
    for node in member.graph.nodes:
        if node.role == ROLE_ADDED:
            absorb(node.origin, ew.node_map[node.name])

    subgraphs: dict[str, EdgeSubgraph] = {}
    claimed: set[str] = set()
    for eid, vs in h.edges:
        used = sorted(edge_nodes[eid])
        clash = sorted(set(used) & claimed)
        if clash:
            raise ProjectionFailure(f"host edges {clash} claimed twice")
        claimed.update(used)
        images = {vertex_map[v] for v in vs}
        if used:
            covered = set().union(*(g.edge_map[e] for e in used))
            extras = sorted(covered - images)
        else:
            extras = []
        subgraphs[eid] = EdgeSubgraph(tuple(used), tuple(extras))
    replay = build_replay(h, g, vertex_map, subgraphs)
    return ImmersionWitness(vertex_map, subgraphs, replay)


# -- main decision procedure ---------------------------------------------------


def _preflight_no(h: Hypergraph, g: Hypergraph) -> str | None:
    if len(h.vertices) > len(g.vertices):
        return "guest has more vertices than host"
    if sum(1 for _, vs in h.edges if len(vs) >= 2) > len(g.edges):
        return "guest has more non-singleton hyperedges than host edges"
    return None


def decide_immersion(
    h: Hypergraph,
    g: Hypergraph,
    params: Params | None = None,
    budget: int | None = None,
    star_only: bool = False,
) -> Decision:
    """Decide whether h immerses in g via the division/embedding reduction.

    In "pin" mode, pattern terminals are constrained to first-duplicate vertex
    nodes of the factor graph with distinct origins. In "literalDensify" mode
    the same constraint is enforced structurally by attaching K_L cliques to
    terminals and to every first-duplicate host vertex node.
    """
    if params is None:
        params = default_params(h, g)
    stats: dict = {"mode": params.mode, "M": params.M, "L": params.L,
                   "divisions": 0, "tried": 0, "expansions": 0}
    reason = _preflight_no(h, g)
    if reason is not None:
        stats["preflight"] = reason
        return Decision("no", None, stats)
    dset = division_set(h, star_only=star_only)
    stats["divisions"] = len(dset.members)
    host = m_factor_graph(g, params.M)
    dup1 = [n.name for n in host.nodes if n.role == ROLE_VERTEX and n.dup == 1]
    if params.mode == "literalDensify":
        search_host = densify(host, dup1, params.L) if dup1 else host
    else:
        search_host = host
    saw_unknown = False
    for member in dset.members:
        stats["tried"] += 1
        if params.mode == "pin":
            pattern = member.graph
            pins = pattern.pinned
        else:
            terminals = sorted(pattern_n.name for pattern_n in member.graph.nodes
                               if pattern_n.role == ROLE_VERTEX)
            pattern = densify(member.graph, terminals, params.L) if terminals \
                else member.graph
            pins = frozenset()
        res = find_embedding(pattern, search_host, pins, budget)
        stats["expansions"] += res.expansions
        if res.status == "unknown":
            saw_unknown = True
            continue
        if res.status == "yes":
            w = extract_witness(h, g, member, search_host, res.witness)
            problems = immersion_violations(h, g, w)
            if problems:
                raise ProjectionFailure("; ".join(problems))
            return Decision("yes", w, stats)
    if saw_unknown:
        return Decision("unknown", None, stats)
    return Decision("no", None, stats)


def decide_dual_immersion(
    h: Hypergraph,
    g: Hypergraph,
    params: Params | None = None,
    budget: int | None = None,
) -> Decision:
    """Decide immersion of the transposed pair: vertices act as hyperedges.

    Degree-0 vertices are dropped by transposition; the counts are reported in
    the stats so callers can tell when the answer is about a smaller pair.
    """
    th = transpose(h)
    tg = transpose(g)
    d = decide_immersion(th.hypergraph, tg.hypergraph, params, budget)
    d.stats["droppedGuestVertices"] = list(th.dropped_vertices)
    d.stats["droppedHostVertices"] = list(tg.dropped_vertices)
    return d


# -- brute-force oracle ---------------------------------------------------------


def immersion_oracle(h: Hypergraph, g: Hypergraph, budget: int | None = None) -> Decision:
    """Independent exhaustive decision: all injective vertex maps, all
    per-hyperedge edge-set covers by increasing size. Only usable on small
    instances; exists to cross-check the reduction pipeline."""
    stats = {"maps": 0, "covers": 0}
    ticks = 0

    def tick():
        nonlocal ticks
        ticks += 1
        if budget is not None and ticks > budget:
            raise _Budget()

    if _preflight_no(h, g) is not None:
        return Decision("no", None, stats)
    gm = g.edge_map
    all_ids = sorted(gm)
    # larger hyperedges first: they are the hardest to cover
    order = sorted(h.edges, key=lambda e: (-len(e[1]), e[0]))
    assignment: dict[str, tuple[str, ...]] = {}

    def covers(vmap: dict) -> bool:
        def assign(i: int, available: tuple[str, ...]) -> bool:
            if i == len(order):
                return True
            eid, vs = order[i]
            targets = sorted({vmap[v] for v in vs})
            if len(vs) == 1:
                assignment[eid] = ()
                return assign(i + 1, available)
            for size in range(1, len(available) + 1):
                for S in combinations(available, size):
                    tick()
                    stats["covers"] += 1
                    if not is_connected_cover(g, S, targets):
                        continue
                    covered = set().union(*(gm[e] for e in S))
                    if not set(targets) <= covered:
                        continue
                    assignment[eid] = S
                    rest = tuple(e for e in available if e not in S)
                    if assign(i + 1, rest):
                        return True
                    del assignment[eid]
            return False

        return assign(0, tuple(all_ids))

    try:
        for perm in permutations(g.vertices, len(h.vertices)):
            tick()
            stats["maps"] += 1
            vmap = dict(zip(h.vertices, perm))
            assignment.clear()
            if covers(vmap):
                subgraphs = {}
                for eid, vs in h.edges:
                    S = assignment[eid]
                    images = {vmap[v] for v in vs}
                    covered = set().union(*(gm[e] for e in S)) if S else set()
                    subgraphs[eid] = EdgeSubgraph(
                        tuple(sorted(S)), tuple(sorted(covered - images)))
                replay = build_replay(h, g, vmap, subgraphs)
                return Decision("yes", ImmersionWitness(vmap, subgraphs, replay), stats)
    except _Budget:
        return Decision("unknown", None, stats)
    return Decision("no", None, stats)


# -- witness JSON ---------------------------------------------------------------


def witness_to_obj(w: ImmersionWitness) -> dict:
    return {
        "vertexMap": dict(sorted(w.vertex_map.items())),
        "edgeSubgraphs": {
            eid: {"edges": list(sub.edges), "extraVertices": list(sub.extra_vertices)}
            for eid, sub in sorted(w.edge_subgraphs.items())
        },
        "replay": [s.to_obj() for s in w.replay],
    }


def witness_from_obj(obj: dict) -> ImmersionWitness:
    subgraphs = {
        eid: EdgeSubgraph(tuple(sub["edges"]), tuple(sub["extraVertices"]))
        for eid, sub in obj["edgeSubgraphs"].items()
    }
    replay = tuple(OperationStep.from_obj(s) for s in obj["replay"])
    return ImmersionWitness(dict(obj["vertexMap"]), subgraphs, replay)
