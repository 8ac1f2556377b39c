"""Per-hyperedge division topologies (reduced Steiner trees over terminals),
whole-hypergraph division patterns, and the finite deduplicated set D(H)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .canonical import canonical_labeling
from .errors import CapExceeded, IndexOutOfRange
from .hypergraph import Hypergraph
from .labeled import (
    ROLE_ADDED,
    ROLE_VERTEX,
    GraphNode,
    LabeledGraph,
)

MAX_TERMINALS = 6
MAX_RAW_PATTERNS = 100_000


@dataclass(frozen=True)
class CanonicalTree:
    """Reduced Steiner-tree topology over labeled terminals.

    Links are pairs over terminal names and branch names ("b0", "b1", ...).
    Every leaf is a terminal and every branch node has degree >= 3, so at most
    max(r-2, 0) branch nodes exist.
    """

    terminals: tuple[str, ...]
    branch_count: int
    links: tuple[tuple[str, str], ...]
    is_star: bool


def _prufer_decode(seq: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    deg = [1] * n
    for s in seq:
        deg[s] += 1
    avail = deg[:]
    edges = []
    for s in seq:
        leaf = min(i for i in range(n) if avail[i] == 1)
        edges.append((leaf, s))
        avail[leaf] = 0
        avail[s] -= 1
    rest = [i for i in range(n) if avail[i] >= 1]
    edges.append((rest[0], rest[1]))
    return edges


def _prufer_sequences(r: int, n: int):
    """Prüfer sequences of length n-2 over n nodes where every branch node
    (index >= r) occurs at least twice, i.e. has degree >= 3. Pruned by the
    number of still-required branch occurrences, which keeps r=5,6 feasible."""
    length = n - 2
    counts = [0] * n
    seq = [0] * length

    def rec(pos: int, needed: int):
        remaining = length - pos
        if needed > remaining:
            return
        if pos == length:
            yield tuple(seq)
            return
        for s in range(n):
            seq[pos] = s
            counts[s] += 1
            extra = 1 if (s >= r and counts[s] <= 2) else 0
            yield from rec(pos + 1, needed - extra)
            counts[s] -= 1

    yield from rec(0, 2 * (n - r))


@lru_cache(maxsize=None)
def _enumerate_classes(r: int) -> tuple:
    """All division-tree classes for r indexed terminals, one representative
    per isomorphism class fixing terminal labels (branch nodes permutable)."""
    if r < 1:
        raise IndexOutOfRange("a hyperedge has at least one vertex")
    if r > MAX_TERMINALS:
        raise CapExceeded(f"hyperedge size {r} exceeds cap {MAX_TERMINALS}")
    found = {}
    for b in range(0, max(r - 2, 0) + 1):
        n = r + b
        if n == 1:
            trees = [()]
        elif n == 2:
            trees = [((0, 1),)]
        else:
            trees = []
            for seq in _prufer_sequences(r, n):
                edges = _prufer_decode(seq, n)
                deg = [0] * n
                for u, v in edges:
                    deg[u] += 1
                    deg[v] += 1
                if any(deg[i] < 3 for i in range(r, n)):
                    continue
                trees.append(tuple(sorted(tuple(sorted(e)) for e in edges)))
        for edges in trees:
            colors = {i: (f"T:{i}" if i < r else "B") for i in range(n)}
            cert, _ = canonical_labeling(list(range(n)), list(edges), colors)
            key = (b, cert)
            if key not in found:
                found[key] = (b, edges)
    out = []
    for key in sorted(found, key=lambda k: (k[0], k[1])):
        b, edges = found[key]
        n = r + b
        star = (b == 0 and r <= 2) or (b == 1 and all(
            (u == r or v == r) for u, v in edges) and len(edges) == r)
        out.append((b, edges, star))
    return tuple(out)


def enumerate_edge_divisions(terminals) -> tuple[CanonicalTree, ...]:
    """Every reduced division topology of a hyperedge with these terminals,
    exactly one per isomorphism class fixing terminal labels."""
    terms = tuple(sorted(terminals))
    r = len(terms)
    out = []
    for b, edges, star in _enumerate_classes(r):
        def name(i):
            return terms[i] if i < r else f"b{i - r}"
        links = tuple((name(u), name(v)) for u, v in edges)
        out.append(CanonicalTree(terms, b, links, star))
    return tuple(out)


@dataclass(frozen=True)
class DivisionPattern:
    """Union of one division tree per hyperedge, glued at shared terminals.

    `link_owners` names the hyperedge each pattern link belongs to, aligned
    with `graph.links`; terminals carry the pinned mark."""

    graph: LabeledGraph
    choice_vector: tuple[int, ...]
    link_owners: tuple[str, ...]
    dedup_key: object = None


def _terminal(v: str) -> str:
    return f"t:{v}"


def assemble_pattern(h: Hypergraph, choices) -> DivisionPattern:
    choices = tuple(choices)
    if len(choices) != len(h.edges):
        raise IndexOutOfRange("one choice index per hyperedge required")
    nodes = [GraphNode(_terminal(v), ROLE_VERTEX, v, 1) for v in h.vertices]
    pinned = frozenset(_terminal(v) for v in h.vertices)
    links: list[tuple[str, str]] = []
    owners: list[str] = []
    for (eid, vs), c in zip(h.edges, choices):
        trees = enumerate_edge_divisions(vs)
        if not 0 <= c < len(trees):
            raise IndexOutOfRange(f"choice {c} out of range for edge {eid!r}")
        tree = trees[c]
        rename = {t: _terminal(t) for t in tree.terminals}
        for i in range(tree.branch_count):
            name = f"b:{eid}:{i}"
            rename[f"b{i}"] = name
            nodes.append(GraphNode(name, ROLE_ADDED, eid))
        for u, v in tree.links:
            links.append((rename[u], rename[v]))
            owners.append(eid)
    graph = LabeledGraph(tuple(nodes), tuple(links), pinned)
    return DivisionPattern(graph, choices, tuple(owners))


def pattern_dedup_key(p: DivisionPattern):
    """Mark-preserving canonical form: terminal labels forgotten, the
    original/added distinction kept."""
    return p.graph.certificate(lambda n: "T" if n.role == ROLE_VERTEX else "B")


def realize_division(h: Hypergraph, choices) -> Hypergraph:
    """The division as a hypergraph: tree links between terminals become
    size-2 hyperedges, branch nodes become hyperedges over their terminal
    neighbors, and branch-branch links are glued through fresh vertices."""
    pattern = assemble_pattern(h, choices)
    vertices = list(h.vertices)
    # hyperedge contents per branch node; direct edges for terminal pairs
    branch_members: dict[str, set[str]] = {
        n.name: set() for n in pattern.graph.nodes if n.role == ROLE_ADDED
    }
    edges: list[tuple[str, frozenset[str]]] = []
    counters: dict[str, int] = {}

    def next_idx(eid: str) -> int:
        counters[eid] = counters.get(eid, 0) + 1
        return counters[eid]

    node_map = pattern.graph.node_map
    for (u, v), eid in zip(pattern.graph.links, pattern.link_owners):
        nu, nv = node_map[u], node_map[v]
        if nu.role == ROLE_VERTEX and nv.role == ROLE_VERTEX:
            edges.append((f"d:{eid}:{next_idx(eid)}", frozenset((nu.origin, nv.origin))))
        elif nu.role == ROLE_ADDED and nv.role == ROLE_ADDED:
            w = f"w:{eid}:{next_idx(eid)}"
            vertices.append(w)
            branch_members[u].add(w)
            branch_members[v].add(w)
        else:
            branch, term = (u, nv.origin) if nu.role == ROLE_ADDED else (v, nu.origin)
            branch_members[branch].add(term)
    for name in sorted(branch_members):
        if branch_members[name]:
            edges.append((f"d:{name}", frozenset(branch_members[name])))
    # size-1 hyperedges have a single-node tree and no links; keep them as-is
    for (eid, vs), c in zip(h.edges, choices):
        if len(vs) == 1:
            edges.append((f"d:{eid}:self", vs))
    edges.sort(key=lambda e: e[0])
    return Hypergraph(tuple(vertices), tuple(edges))


@dataclass(frozen=True)
class DivisionSet:
    members: tuple[DivisionPattern, ...]

    @property
    def dedup_keys(self) -> tuple:
        return tuple(m.dedup_key for m in self.members)


def division_set(
    h: Hypergraph,
    star_only: bool = False,
    max_raw: int = MAX_RAW_PATTERNS,
) -> DivisionSet:
    """The finite minimum set D(H): one representative per topological class
    of divisions of H, under isomorphism that may permute original vertices
    but preserves the original/added mark."""
    per_edge: list[list[int]] = []
    total = 1
    for eid, vs in h.edges:
        trees = enumerate_edge_divisions(vs)
        idxs = [i for i, t in enumerate(trees) if t.is_star] if star_only \
            else list(range(len(trees)))
        per_edge.append(idxs)
        total *= len(idxs)
        if total > max_raw:
            raise CapExceeded(
                f"raw division count exceeds cap {max_raw} for {eid!r}")
    classes: dict = {}
    for choices in product(*per_edge):
        p = assemble_pattern(h, choices)
        key = pattern_dedup_key(p)
        if key not in classes:
            classes[key] = DivisionPattern(p.graph, p.choice_vector, p.link_owners, key)
    members = tuple(classes[k] for k in sorted(classes))
    return DivisionSet(members)
