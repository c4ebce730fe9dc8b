"""Node-ordering construction: Cuthill-McKee, BFS/DFS baselines, and an
exact small-graph bandwidth oracle.

Cuthill-McKee visits nodes breadth-first from a pseudo-peripheral root,
expanding each node's unvisited neighbors in ascending-degree order.  The
resulting position sequence tends to keep adjacent nodes close together,
which is exactly what a narrow band representation needs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import CapabilityError, InputError
from .graph import Graph, Ordering, OrderingFamily, identity_ordering
from .rng import derive_rng

__all__ = [
    "TieBreak",
    "OrderingConfig",
    "components",
    "pseudo_peripheral_node",
    "cuthill_mckee",
    "bfs_order",
    "dfs_order",
    "make_ordering",
    "exact_bandwidth",
    "EXACT_NODE_LIMIT",
]

EXACT_NODE_LIMIT = 10


class TieBreak(Enum):
    """How equal-degree neighbors are sequenced during Cuthill-McKee."""

    DEGREE_THEN_INDEX = "degree_then_index"
    RANDOM = "random"


@dataclass(frozen=True)
class OrderingConfig:
    family: OrderingFamily = OrderingFamily.CM
    seed: int = 0
    tie_break: TieBreak = TieBreak.RANDOM

    def reseeded(self, seed: int) -> "OrderingConfig":
        return replace(self, seed=seed)


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted node lists, ordered by smallest member."""
    seen = [False] * g.n
    out: list[list[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        out.append(sorted(comp))
    return out


def _bfs_levels(g: Graph, root: int) -> list[list[int]]:
    """Level sets of a BFS from ``root`` within its component."""
    seen = {root}
    levels = [[root]]
    while True:
        nxt = []
        for u in levels[-1]:
            for v in g.adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            return levels
        levels.append(nxt)


def _george_liu(g: Graph, start: int) -> int:
    """Pseudo-peripheral node of ``start``'s component.

    Iteratively re-roots at a minimum-degree node of the deepest BFS level
    while the eccentricity keeps growing.
    """
    x = start
    levels = _bfs_levels(g, x)
    while True:
        ecc_x = len(levels) - 1
        y = min(levels[-1], key=lambda v: (len(g.adj[v]), v))
        levels_y = _bfs_levels(g, y)
        if len(levels_y) - 1 > ecc_x:
            x, levels = y, levels_y
        else:
            return y


def pseudo_peripheral_node(g: Graph, seed: int = 0) -> int:
    """Pseudo-peripheral node of a connected graph, from a seeded start."""
    if len(components(g)) != 1:
        raise InputError("pseudo-peripheral search requires a connected graph")
    rng = derive_rng(seed)
    start = int(rng.integers(g.n))
    return _george_liu(g, start)


def _shuffled_within_degree(nbrs: list[int], g: Graph, rng: np.random.Generator) -> list[int]:
    """Ascending-degree order with a uniform shuffle inside each degree class."""
    groups: dict[int, list[int]] = {}
    for v in nbrs:
        groups.setdefault(len(g.adj[v]), []).append(v)
    out: list[int] = []
    for deg in sorted(groups):
        members = groups[deg]
        if len(members) > 1:
            members = [members[j] for j in rng.permutation(len(members))]
        out.extend(members)
    return out


def cuthill_mckee(g: Graph, cfg: OrderingConfig | None = None) -> Ordering:
    """Cuthill-McKee ordering, handling each component independently.

    With ``TieBreak.RANDOM`` the root search starts from a seeded random
    node and equal-degree neighbors are drawn in uniformly random order;
    with ``TieBreak.DEGREE_THEN_INDEX`` everything is index-deterministic.
    """
    cfg = cfg or OrderingConfig()
    rng = derive_rng(cfg.seed)
    random_ties = cfg.tie_break is TieBreak.RANDOM
    perm = [0] * g.n
    pos = 0
    visited = [False] * g.n
    for comp in components(g):
        start = comp[int(rng.integers(len(comp)))] if random_ties else comp[0]
        root = _george_liu(g, start)
        visited[root] = True
        perm[root] = pos
        pos += 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            nbrs = [v for v in g.adj[u] if not visited[v]]
            if random_ties:
                nbrs = _shuffled_within_degree(nbrs, g, rng)
            else:
                nbrs.sort(key=lambda v: (len(g.adj[v]), v))
            for v in nbrs:
                visited[v] = True
                perm[v] = pos
                pos += 1
                queue.append(v)
    return Ordering(perm=tuple(perm), family=OrderingFamily.CM)


def bfs_order(g: Graph, cfg: OrderingConfig | None = None) -> Ordering:
    """Breadth-first ordering with seeded random root and neighbor order."""
    cfg = cfg or OrderingConfig(family=OrderingFamily.BFS)
    rng = derive_rng(cfg.seed)
    return _bfs_order_rng(g, rng)


def _bfs_order_rng(g: Graph, rng: np.random.Generator) -> Ordering:
    perm = [0] * g.n
    pos = 0
    visited = [False] * g.n
    for comp in components(g):
        root = comp[int(rng.integers(len(comp)))]
        visited[root] = True
        perm[root] = pos
        pos += 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            nbrs = [v for v in g.adj[u] if not visited[v]]
            if len(nbrs) > 1:
                nbrs = [nbrs[j] for j in rng.permutation(len(nbrs))]
            for v in nbrs:
                visited[v] = True
                perm[v] = pos
                pos += 1
                queue.append(v)
    return Ordering(perm=tuple(perm), family=OrderingFamily.BFS)


def dfs_order(g: Graph, cfg: OrderingConfig | None = None) -> Ordering:
    """Depth-first ordering with seeded random root and neighbor order."""
    cfg = cfg or OrderingConfig(family=OrderingFamily.DFS)
    rng = derive_rng(cfg.seed)
    perm = [0] * g.n
    pos = 0
    visited = [False] * g.n
    for comp in components(g):
        root = comp[int(rng.integers(len(comp)))]
        stack = [root]
        while stack:
            u = stack.pop()
            if visited[u]:
                continue
            visited[u] = True
            perm[u] = pos
            pos += 1
            nbrs = [v for v in g.adj[u] if not visited[v]]
            if len(nbrs) > 1:
                nbrs = [nbrs[j] for j in rng.permutation(len(nbrs))]
            stack.extend(nbrs)
    return Ordering(perm=tuple(perm), family=OrderingFamily.DFS)


def make_ordering(g: Graph, cfg: OrderingConfig) -> Ordering:
    if cfg.family is OrderingFamily.CM:
        return cuthill_mckee(g, cfg)
    if cfg.family is OrderingFamily.BFS:
        return bfs_order(g, cfg)
    if cfg.family is OrderingFamily.DFS:
        return dfs_order(g, cfg)
    if cfg.family is OrderingFamily.IDENTITY:
        return identity_ordering(g.n)
    raise InputError(f"cannot construct orderings of family {cfg.family.value!r}")


# --- exact bandwidth -------------------------------------------------------


def exact_bandwidth(g: Graph, node_limit: int = EXACT_NODE_LIMIT) -> int:
    """Minimum bandwidth over all orderings, by branch and bound.

    Exponential worst case; refuses graphs larger than ``node_limit``
    nodes.  The default limit is deliberately small so accidental use on
    real datasets fails fast; callers that know better may raise it.
    """
    if g.n > node_limit:
        raise CapabilityError(
            f"exact bandwidth supports at most {node_limit} nodes, got {g.n}"
        )
    best = 0
    for comp in components(g):
        best = max(best, _component_exact(g, comp))
    return best


def _component_exact(g: Graph, comp: list[int]) -> int:
    k = len(comp)
    if k == 1:
        return 0
    index = {v: i for i, v in enumerate(comp)}
    adj = [[index[w] for w in g.adj[v]] for v in comp]

    sub = _subgraph(g, comp)
    det = OrderingConfig(tie_break=TieBreak.DEGREE_THEN_INDEX)
    ub = min(_local_bandwidth(sub, cuthill_mckee(sub, det)), k - 1)
    lb = max((len(a) + 1) // 2 for a in adj)
    lb = max(lb, -(-(k - 1) // _diameter(adj)))
    if lb >= ub:
        return ub
    return _branch_and_bound(adj, ub)


def _local_bandwidth(g: Graph, o: Ordering) -> int:
    best = 0
    for u in range(g.n):
        for v in g.adj[u]:
            if v > u:
                best = max(best, abs(o.perm[u] - o.perm[v]))
    return best


def _subgraph(g: Graph, nodes: list[int]) -> Graph:
    index = {v: i for i, v in enumerate(nodes)}
    sets: list[set[int]] = [set() for _ in nodes]
    for v in nodes:
        for w in g.adj[v]:
            if w in index:
                sets[index[v]].add(index[w])
    return Graph(n=len(nodes), adj=tuple(tuple(sorted(s)) for s in sets))


def _diameter(adj: list[list[int]]) -> int:
    k = len(adj)
    diam = 1
    for s in range(k):
        dist = [-1] * k
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        diam = max(diam, max(dist))
    return diam


def _branch_and_bound(adj: list[list[int]], ub: int) -> int:
    """Depth-first placement search for the minimum achievable bandwidth.

    Positions are filled left to right.  Once the node at position ``p``
    still has an unplaced neighbor, every later placement must stay within
    ``bound`` of ``p``; this deadline prunes most of the tree.  ``ub`` is
    known achievable, so the search only looks for strictly better
    orderings.
    """
    k = len(adj)
    best = ub
    pos = [-1] * k
    placed_at = [-1] * k
    remaining = [len(a) for a in adj]

    def rec(depth: int, cur: int, open_from: int) -> None:
        nonlocal best
        if depth == k:
            best = cur
            return
        p = open_from
        while p < depth and remaining[placed_at[p]] == 0:
            p += 1
        if p < depth:
            if depth - p > best - 1:
                return
            forced = depth - p == best - 1
        else:
            forced = False
        if forced:
            candidates = [v for v in adj[placed_at[p]] if pos[v] < 0]
        else:
            candidates = [v for v in range(k) if pos[v] < 0]
        for v in candidates:
            stretch_max = cur
            ok = True
            for u in adj[v]:
                if pos[u] >= 0:
                    s = depth - pos[u]
                    if s > best - 1:
                        ok = False
                        break
                    if s > stretch_max:
                        stretch_max = s
            if not ok:
                continue
            pos[v] = depth
            placed_at[depth] = v
            for u in adj[v]:
                remaining[u] -= 1
            rec(depth + 1, stretch_max, p)
            for u in adj[v]:
                remaining[u] += 1
            pos[v] = -1
            placed_at[depth] = -1
            if best == 1:
                return

    rec(0, 0, 0)
    return best
