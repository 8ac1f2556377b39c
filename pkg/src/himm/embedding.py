"""Exact embedding (topological-minor containment with every pattern node a
branch vertex) of a pattern multigraph in a host graph, with pin constraints.

The search is plain backtracking over injective node images interleaved with
internally-disjoint path routing, made feasible by structural twin collapsing:
host nodes with identical neighborhoods (duplicate vertex copies, clique
members) are interchangeable, so only one unused representative per twin class
is ever tried at a choice point.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass

from .labeled import ROLE_VERTEX, LabeledGraph


@dataclass(frozen=True)
class EmbeddingWitness:
    node_map: dict
    paths: tuple  # ((link_index, (host node, ...)), ...) aligned with pattern.links

    def path_for(self, link_index: int):
        for i, p in self.paths:
            if i == link_index:
                return p
        return None


@dataclass(frozen=True)
class EmbeddingResult:
    status: str  # "yes" | "no" | "unknown"
    witness: EmbeddingWitness | None = None
    expansions: int = 0


class _Budget(Exception):
    pass


def _twin_classes(host: LabeledGraph, adj: dict) -> dict:
    """Interchangeable-node classes: equal open neighborhoods (false twins) or
    equal closed neighborhoods (true twins). Only computed for simple hosts."""
    names = [n.name for n in host.nodes]
    if any(m > 1 for c in adj.values() for m in c.values()):
        return {n: i for i, n in enumerate(names)}
    idx = {n: i for i, n in enumerate(names)}
    parent = list(range(len(names)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    # pin eligibility (vertex role, duplicate index 1) breaks the symmetry, so
    # such nodes never share a class with other copies
    info = host.node_map
    by_open: dict = {}
    by_closed: dict = {}
    for n in names:
        tag = (info[n].role, info[n].dup == 1)
        open_k = (frozenset(adj[n]), tag)
        by_open.setdefault(open_k, []).append(n)
        by_closed.setdefault((frozenset(adj[n]) | {n}, tag), []).append(n)
    for group in list(by_open.values()) + list(by_closed.values()):
        for other in group[1:]:
            union(idx[group[0]], idx[other])
    return {n: find(idx[n]) for n in names}


def find_embedding(
    pattern: LabeledGraph,
    host: LabeledGraph,
    pins: frozenset[str] = frozenset(),
    budget: int | None = None,
) -> EmbeddingResult:
    """Exact search for an embedding of `pattern` in `host`.

    Pinned pattern nodes may only map to host vertex-role nodes with duplicate
    index 1, injectively over distinct origins. `budget` caps the number of
    search expansions; exceeding it yields status "unknown".
    """
    if budget is not None and budget < 1:
        raise ValueError("budget must be >= 1")
    p_nodes = [n.name for n in pattern.nodes]
    h_nodes = [n.name for n in host.nodes]
    if len(p_nodes) > len(h_nodes):
        return EmbeddingResult("no")
    p_adj = pattern.adjacency()
    h_adj = host.adjacency()
    h_info = host.node_map
    h_index = {n: i for i, n in enumerate(h_nodes)}
    twin = _twin_classes(host, h_adj)
    p_deg = {n: sum(p_adj[n].values()) for n in p_nodes}
    h_deg = {n: sum(h_adj[n].values()) for n in h_nodes}

    # static connected-component ids: adjacent pattern nodes must land in the
    # same host component, which refutes cross-component placements without
    # ever enumerating paths
    comp: dict[str, int] = {}
    for start in h_nodes:
        if start in comp:
            continue
        cid = len(comp)
        stack = [start]
        comp[start] = cid
        while stack:
            x = stack.pop()
            for y in h_adj[x]:
                if y not in comp:
                    comp[y] = cid
                    stack.append(y)

    # Hall-type degree preflight: paths leaving an image are edge-disjoint at
    # it, so the i-th largest pattern degree needs a distinct host node of at
    # least that degree; refutes dense patterns without entering the search
    p_sorted = sorted(p_deg.values(), reverse=True)
    h_sorted = sorted(h_deg.values(), reverse=True)
    if any(pd > hd for pd, hd in zip(p_sorted, h_sorted)):
        return EmbeddingResult("no")

    # node order: pinned first, then by attachment to placed nodes, degree desc
    order: list[str] = []
    placed_set: set[str] = set()
    rest = sorted(p_nodes, key=lambda n: (-p_deg[n], n))
    for n in rest:
        if n in pins:
            order.append(n)
            placed_set.add(n)
    # greedy fail-first order over the remaining nodes. Preference, in order:
    # nodes attached to the placed set; nodes in small interchangeability
    # classes (same closed neighborhood in the pattern) — large classes are
    # homogeneous filler like densification cliques and carry no structural
    # constraint, so they go last and core contradictions surface first;
    # nodes with few degree-feasible host images; nodes with a large fraction
    # of their neighborhood already placed
    all_host_degs = sorted(h_deg.values())
    pin_host_degs = sorted(
        h_deg[n] for n in h_nodes
        if h_info[n].role == ROLE_VERTEX and h_info[n].dup == 1)
    def scarcity(n: str) -> int:
        degs = pin_host_degs if n in pins else all_host_degs
        return len(degs) - bisect_left(degs, p_deg[n])
    scarce = {n: scarcity(n) for n in p_nodes}
    closed_groups: dict = {}
    for n in p_nodes:
        closed_groups.setdefault(frozenset(p_adj[n]) | {n}, []).append(n)
    class_size = {n: len(g) for g in closed_groups.values() for n in g}
    attach = {n: sum(1 for m in p_adj[n] if m in placed_set) for n in p_nodes}
    while len(order) < len(p_nodes):
        best = None
        for n in rest:
            if n in placed_set:
                continue
            ratio = attach[n] / p_deg[n] if p_deg[n] else 0.0
            key = (attach[n] == 0 and bool(order),
                   class_size[n], scarce[n], -ratio, -p_deg[n], n)
            if best is None or key < best[0]:
                best = (key, n)
        order.append(best[1])
        placed_set.add(best[1])
        for m in p_adj[best[1]]:
            attach[m] += 1

    # task schedule: place each node, then route every link whose second
    # endpoint was just placed
    pos = {p: i for i, p in enumerate(order)}
    tasks: list[tuple[str, object]] = []
    links_at: dict[int, list[int]] = {}
    for li, (u, v) in enumerate(pattern.links):
        links_at.setdefault(max(pos[u], pos[v]), []).append(li)
    for i, p in enumerate(order):
        tasks.append(("node", p))
        for li in sorted(links_at.get(i, [])):
            tasks.append(("link", li))

    img: dict[str, str] = {}
    used: set[str] = set()
    direct_used: Counter = Counter()
    chosen_paths: dict[int, tuple[str, ...]] = {}
    pinned_origins: set[str] = set()
    expansions = 0

    def tick():
        nonlocal expansions
        expansions += 1
        if budget is not None and expansions > budget:
            raise _Budget()

    def reachable(a: str, b: str) -> bool:
        if a == b:
            return True
        seen = {a}
        stack = [a]
        while stack:
            tick()  # BFS work counts against the budget, not just choices
            x = stack.pop()
            for y in h_adj[x]:
                if y == b:
                    return True
                if y not in seen and y not in used:
                    seen.add(y)
                    stack.append(y)
        return False

    def iter_paths(a: str, b: str):
        """Simple host paths a..b whose interiors avoid `used`, direct paths
        respecting remaining link multiplicity; twin-collapsed extension."""
        path = [a]
        on_path: set[str] = set()

        def extend():
            tick()
            cur = path[-1]
            if b in h_adj[cur]:
                key = (min(cur, b), max(cur, b))
                if len(path) > 1 or direct_used[key] < h_adj[cur][b]:
                    path.append(b)
                    yield tuple(path)
                    path.pop()
            seen_classes = set()
            for y in sorted(h_adj[cur], key=lambda y: h_index[y]):
                if y == b or y in used or y in on_path or y == a:
                    continue
                if twin[y] in seen_classes:
                    continue
                seen_classes.add(twin[y])
                if not reachable(y, b):
                    continue
                path.append(y)
                on_path.add(y)
                yield from extend()
                on_path.remove(y)
                path.pop()

        yield from extend()

    def candidates(p: str):
        pref: list[str] = []
        seen: set[str] = set()
        for q in p_adj[p]:
            if q in img:
                for y in sorted(h_adj[img[q]], key=lambda y: h_index[y]):
                    if y not in seen:
                        seen.add(y)
                        pref.append(y)
        ordered = pref + [n for n in h_nodes if n not in seen]
        placed_comps = {comp[img[q]] for q in p_adj[p] if q in img}
        seen_classes: set = set()
        for hnode in ordered:
            if hnode in used:
                continue
            if h_deg[hnode] < p_deg[p]:
                continue
            if any(c != comp[hnode] for c in placed_comps):
                continue
            if p in pins:
                info = h_info[hnode]
                if info.role != ROLE_VERTEX or info.dup != 1:
                    continue
                if info.origin in pinned_origins:
                    continue
            else:
                if twin[hnode] in seen_classes:
                    continue
                seen_classes.add(twin[hnode])
            yield hnode

    def node_choices(p: str):
        """Apply one candidate image per resumption, undoing on re-entry."""
        for hnode in candidates(p):
            tick()
            img[p] = hnode
            used.add(hnode)
            if p in pins:
                pinned_origins.add(h_info[hnode].origin)
            yield
            if p in pins:
                pinned_origins.discard(h_info[hnode].origin)
            used.discard(hnode)
            del img[p]

    def link_choices(li: int):
        u, v = pattern.links[li]
        for path in iter_paths(img[u], img[v]):
            interior = path[1:-1]
            used.update(interior)
            if len(path) == 2:
                direct_used[(min(path[0], path[1]), max(path[0], path[1]))] += 1
            chosen_paths[li] = path
            yield
            del chosen_paths[li]
            if len(path) == 2:
                direct_used[(min(path[0], path[1]), max(path[0], path[1]))] -= 1
            used.difference_update(interior)

    def choices(t: int):
        kind, x = tasks[t]
        return node_choices(x) if kind == "node" else link_choices(x)

    # iterative backtracking: the stack depth equals the task index, so the
    # search never recurses over pattern size
    sentinel = object()
    found = not tasks
    stack = [choices(0)] if tasks else []
    try:
        while stack:
            if next(stack[-1], sentinel) is sentinel:
                stack.pop()
                continue
            if len(stack) == len(tasks):
                found = True
                break
            stack.append(choices(len(stack)))
    except _Budget:
        return EmbeddingResult("unknown", None, expansions)
    if not found:
        return EmbeddingResult("no", None, expansions)
    paths = tuple(sorted(chosen_paths.items()))
    return EmbeddingResult("yes", EmbeddingWitness(dict(img), paths), expansions)


def verify_embedding(
    pattern: LabeledGraph,
    host: LabeledGraph,
    pins: frozenset[str],
    w: EmbeddingWitness,
) -> bool:
    """Pure check of the embedding invariants and pin constraints."""
    h_info = host.node_map
    h_adj = host.adjacency()
    p_names = {n.name for n in pattern.nodes}
    if set(w.node_map) != p_names:
        return False
    images = list(w.node_map.values())
    if len(set(images)) != len(images):
        return False
    if any(v not in h_info for v in images):
        return False
    seen_origins = set()
    for p in pins:
        info = h_info.get(w.node_map.get(p, ""), None)
        if info is None or info.role != ROLE_VERTEX or info.dup != 1:
            return False
        if info.origin in seen_origins:
            return False
        seen_origins.add(info.origin)
    path_by_link = dict(w.paths)
    if sorted(path_by_link) != list(range(len(pattern.links))):
        return False
    interiors_seen: set[str] = set()
    direct: Counter = Counter()
    image_set = set(images)
    for li, (u, v) in enumerate(pattern.links):
        p = path_by_link[li]
        if len(p) < 2 or p[0] != w.node_map[u] or p[-1] != w.node_map[v]:
            return False
        if len(set(p)) != len(p):
            return False
        for a, b in zip(p, p[1:]):
            if h_adj[a][b] < 1:
                return False
        if len(p) == 2:
            key = (min(p[0], p[1]), max(p[0], p[1]))
            direct[key] += 1
            if direct[key] > h_adj[p[0]][p[1]]:
                return False
        for x in p[1:-1]:
            if x in image_set or x in interiors_seen:
                return False
        interiors_seen.update(p[1:-1])
    return True
