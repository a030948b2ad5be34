"""Regular-factor extraction and the exhaustive degree-factor oracle.

The oracle enumerates all 3^n partitions (S, T, U) and checks the
deficiency condition R_r(S,T) >= Q_r(S,T) exactly.  Extraction reduces the
r-factor problem to perfect matching through a slot gadget; a flow-based
fast path over a balanced orientation handles large even-degree instances
and falls back to the exact gadget matching when it comes up short.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph, norm_edge
from .matching import is_perfect, max_matching_general

TUTTE_CAP = 12
FLOW_FASTPATH_MIN_N = 40


# -- Tutte condition oracle ---------------------------------------------------


@dataclass
class TutteVerdict:
    exists: bool
    violation: tuple[set[int], set[int]] | None = None  # (S, T) witnessing failure
    partitions_checked: int = 0


def tutte_quantities(g: Graph, r: int, s_set: set[int], t_set: set[int]) -> tuple[int, int]:
    """R_r(S,T) and Q_r(S,T) for a partition (S, T, U) of the vertices."""
    u_set = set(range(g.n)) - s_set - t_set
    big_r = (
        sum(g.degree(v) for v in t_set)
        - g.edge_count_between(s_set, t_set)
        + r * (len(s_set) - len(t_set))
    )
    big_q = 0
    for comp in g.components(u_set):
        if (r * len(comp) + g.edge_count_between(comp, t_set)) % 2 == 1:
            big_q += 1
    return big_r, big_q


def tutte_check_exhaustive(g: Graph, r: int, cap: int = TUTTE_CAP) -> TutteVerdict:
    """Exhaustive r-factor existence check over all 3^n partitions."""
    n = g.n
    if n > cap:
        raise ValueError(f"n={n} above exhaustive cap {cap}")
    if r < 1:
        raise ValueError("r must be positive")
    adj_mask = [0] * n
    for u, v in g.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    deg = [g.degree(v) for v in range(n)]
    full = (1 << n) - 1
    checked = 0
    # assignment digit per vertex: 0 -> S, 1 -> T, 2 -> U
    for code in range(3**n):
        s_mask = t_mask = 0
        c = code
        for v in range(n):
            d = c % 3
            c //= 3
            if d == 0:
                s_mask |= 1 << v
            elif d == 1:
                t_mask |= 1 << v
        checked += 1
        u_mask = full & ~s_mask & ~t_mask
        d_t = e_st = 0
        tm = t_mask
        while tm:
            b = tm & -tm
            v = b.bit_length() - 1
            tm ^= b
            d_t += deg[v]
            e_st += (adj_mask[v] & s_mask).bit_count()
        big_r = d_t - e_st + r * (s_mask.bit_count() - t_mask.bit_count())
        # odd components of G[U]
        big_q = 0
        rem = u_mask
        while rem:
            b = rem & -rem
            comp = b
            frontier = b
            while frontier:
                nxt = 0
                fm = frontier
                while fm:
                    vb = fm & -fm
                    fm ^= vb
                    nxt |= adj_mask[vb.bit_length() - 1] & rem & ~comp
                comp |= nxt
                frontier = nxt
            rem &= ~comp
            e_ct = 0
            cm = comp
            while cm:
                vb = cm & -cm
                cm ^= vb
                e_ct += (adj_mask[vb.bit_length() - 1] & t_mask).bit_count()
            if (r * comp.bit_count() + e_ct) % 2 == 1:
                big_q += 1
        if big_r < big_q:
            s_set = {v for v in range(n) if s_mask >> v & 1}
            t_set = {v for v in range(n) if t_mask >> v & 1}
            return TutteVerdict(False, (s_set, t_set), checked)
    return TutteVerdict(True, None, checked)


# -- slot gadget reduction to perfect matching --------------------------------


@dataclass
class GadgetGraph:
    """Perfect-matching gadget for the r-factor problem.

    Per host vertex v: one edge-slot node for each incident edge (ordered by
    neighbor id) and deg(v) - r core-slot nodes; core slots join every edge
    slot of v, and each host edge uv gets a connector between u's and v's
    slots for uv.  A perfect matching selects, via matched connectors, a
    spanning subgraph with every degree exactly r.
    """

    host: Graph
    r: int
    n_nodes: int
    adj: list[list[int]]
    slot_of: dict[tuple[int, int], tuple[int, int]]  # host edge -> (slot at u, slot at v)

    def matching_to_factor(self, match: list[int]) -> Graph:
        f = Graph(self.host.n)
        for (u, v), (su, sv) in self.slot_of.items():
            if match[su] == sv:
                f.add_edge(u, v)
        return f


def build_gadget(g: Graph, r: int) -> GadgetGraph:
    if r < 1:
        raise ValueError("r must be positive")
    if r > g.min_degree():
        raise ValueError(f"r={r} exceeds minimum degree {g.min_degree()}")
    n_nodes = 0
    edge_slot: dict[tuple[int, int], int] = {}  # (v, neighbor) -> node id
    core_range: list[tuple[int, int]] = []
    for v in range(g.n):
        nbrs = g.neighbors(v)
        for u in nbrs:
            edge_slot[(v, u)] = n_nodes
            n_nodes += 1
        core_range.append((n_nodes, n_nodes + len(nbrs) - r))
        n_nodes += len(nbrs) - r
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for v in range(g.n):
        lo, hi = core_range[v]
        slots = [edge_slot[(v, u)] for u in g.neighbors(v)]
        for c in range(lo, hi):
            adj[c] = list(slots)
            for s in slots:
                adj[s].append(c)
    slot_of: dict[tuple[int, int], tuple[int, int]] = {}
    for u, v in sorted(g.edges):
        su, sv = edge_slot[(u, v)], edge_slot[(v, u)]
        adj[su].append(sv)
        adj[sv].append(su)
        slot_of[(u, v)] = (su, sv)
    return GadgetGraph(host=g, r=r, n_nodes=n_nodes, adj=adj, slot_of=slot_of)


@dataclass
class MatchingResult:
    match: list[int]
    perfect: bool

    def pairs(self) -> set[tuple[int, int]]:
        return {(v, u) for v, u in enumerate(self.match) if u > v}


def perfect_matching_general(g: Graph) -> MatchingResult:
    adj = [g.neighbors(v) for v in range(g.n)]
    match = max_matching_general(adj)
    return MatchingResult(match=match, perfect=is_perfect(match) and g.n > 0)


def _seed_matching_from_subgraph(gadget: GadgetGraph, sub: Graph) -> list[int]:
    """Initial gadget matching induced by a subgraph with degrees <= r."""
    g = gadget.host
    match = [-1] * gadget.n_nodes
    for (u, v), (su, sv) in gadget.slot_of.items():
        if sub.has_edge(u, v):
            match[su] = sv
            match[sv] = su
    # pair leftover edge slots with core slots vertex-locally
    node = 0
    for v in range(g.n):
        d = g.degree(v)
        slots = list(range(node, node + d))
        node += d
        cores = list(range(node, node + d - gadget.r))
        node += d - gadget.r
        free_slots = [s for s in slots if match[s] == -1]
        for c, s in zip(cores, free_slots):
            match[c] = s
            match[s] = c
    return match


def _greedy_degree_bounded_subgraph(g: Graph, r: int) -> Graph:
    sub = Graph(g.n)
    deg = [0] * g.n
    for u, v in sorted(g.edges):
        if deg[u] < r and deg[v] < r:
            sub.add_edge(u, v)
            deg[u] += 1
            deg[v] += 1
    return sub


# -- Dinic max-flow fast path over a balanced orientation ---------------------


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.head[u].append(idx)
        self.to.append(u)
        self.cap.append(0)
        self.head[v].append(idx + 1)
        return idx

    def max_flow(self, s: int, t: int) -> int:
        from collections import deque

        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for i in self.head[u]:
                    if self.cap[i] > 0 and level[self.to[i]] == -1:
                        level[self.to[i]] = level[u] + 1
                        q.append(self.to[i])
            if level[t] == -1:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    i = self.head[u][it[u]]
                    v = self.to[i]
                    if self.cap[i] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[i]))
                        if got:
                            self.cap[i] -= got
                            self.cap[i ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            import sys

            old = sys.getrecursionlimit()
            sys.setrecursionlimit(max(old, self.n + 100))
            try:
                while True:
                    pushed = dfs(s, 1 << 60)
                    if not pushed:
                        break
                    flow += pushed
            finally:
                sys.setrecursionlimit(old)


def _balanced_orientation(g: Graph, rotate: int = 0) -> list[tuple[int, int]]:
    """Orient all edges so every vertex has |out - in| <= 1.

    Odd-degree vertices are paired through a virtual vertex, Euler circuits
    are traced per component, and virtual arcs dropped.  `rotate` perturbs
    the adjacency scan order so retries explore different orientations.
    """
    n = g.n
    adj: list[list[int]] = [g.neighbors(v) for v in range(n)]
    odd = [v for v in range(n) if len(adj[v]) % 2 == 1]
    virtual = n
    for v in odd:
        adj[v].append(virtual)
    adj.append(list(odd))
    if rotate:
        for v in range(len(adj)):
            k = rotate % max(1, len(adj[v]))
            adj[v] = adj[v][k:] + adj[v][:k]
    used: set[tuple[int, int]] = set()
    ptr = [0] * (n + 1)
    arcs: list[tuple[int, int]] = []
    for start in range(n + 1):
        while ptr[start] < len(adj[start]):
            # Hierholzer from `start`
            stack = [start]
            circuit: list[int] = []
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < len(adj[u]):
                    w = adj[u][ptr[u]]
                    ptr[u] += 1
                    if norm_edge(u, w) not in used:
                        used.add(norm_edge(u, w))
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    circuit.append(stack.pop())
            circuit.reverse()
            for a, b in zip(circuit, circuit[1:]):
                if a != virtual and b != virtual:
                    arcs.append((a, b))
    return arcs


def _factor_via_flow(g: Graph, r: int, rotate: int = 0) -> Graph | None:
    """Even-r factor through a balanced orientation + exact-degree flow."""
    assert r % 2 == 0
    arcs = _balanced_orientation(g, rotate)
    n = g.n
    half = r // 2
    s, t = 2 * n, 2 * n + 1
    net = _Dinic(2 * n + 2)
    for v in range(n):
        net.add(s, v, half)
        net.add(n + v, t, half)
    arc_ids = [net.add(u, n + v, 1) for u, v in arcs]
    if net.max_flow(s, t) != n * half:
        return None
    f = Graph(n)
    for (u, v), idx in zip(arcs, arc_ids):
        if net.cap[idx] == 0:
            f.add_edge(u, v)
    return f


# -- extraction ---------------------------------------------------------------


def extract_r_factor(g1: Graph, r: int) -> Graph | None:
    """Spanning subgraph with every degree exactly r, or None.

    Exactness is guaranteed by the gadget + blossom route; for large even-r
    instances the flow fast path is tried first (it can miss but never
    errs), so a None answer always reflects the exact matcher's verdict.
    """
    if r < 1 or (r * g1.n) % 2 == 1 or r > g1.min_degree():
        return None
    if r % 2 == 0 and g1.n >= FLOW_FASTPATH_MIN_N:
        for attempt in range(3):
            f = _factor_via_flow(g1, r, rotate=attempt)
            if f is not None:
                _assert_regular(f, r)
                return f
    gadget = build_gadget(g1, r)
    seed = _seed_matching_from_subgraph(gadget, _greedy_degree_bounded_subgraph(g1, r))
    match = max_matching_general(gadget.adj, init=seed)
    if not is_perfect(match):
        return None
    f = gadget.matching_to_factor(match)
    _assert_regular(f, r)
    return f


def _assert_regular(f: Graph, r: int) -> None:
    bad = [v for v in range(f.n) if f.degree(v) != r]
    if bad:
        raise AssertionError(f"factor not {r}-regular at vertices {bad[:5]}")


def extract_with_retry(
    g1: Graph, r1: int, floor_r: int = 2, step: int = 2
) -> tuple[Graph | None, int]:
    """Retry extraction at r1, r1-2, ... down to floor_r; returns (factor, r).

    Degrees above the sample's minimum cannot support a factor, so the scan
    starts at min(r1, even floor of the minimum degree).
    """
    start = min(r1, 2 * (g1.min_degree() // 2))
    r = start if start % 2 == 0 else start - 1
    while r >= floor_r:
        f = extract_r_factor(g1, r)
        if f is not None:
            return f, r
        r -= step
    return None, 0


# -- boundary growth diagnostic ----------------------------------------------


def boundary_growth_probe(g: Graph, a: set[int], min_deg: float, p0: float) -> dict:
    """Measure |B(A)| against the two boundary-regime inequalities."""
    if not a:
        raise ValueError("a must be nonempty")
    b = g.boundary(a)
    n = g.n
    logn = math.log(n) if n > 1 else 1.0
    a_sz, b_sz = len(a), len(b)
    report: dict = {"a": a_sz, "b": b_sz, "degenerate": a_sz == n}
    if report["degenerate"] or p0 <= 0:
        report["regime"] = None
        return report
    if logn / (a_sz * p0) >= 3.5:
        report["regime"] = "small"
        rhs = a_sz * (min_deg - 6 * logn) / (2 * logn)
        report["inequality"] = {"lhs": b_sz, "rhs": rhs, "holds": b_sz >= rhs}
        report["b_geq_a"] = b_sz >= a_sz
    else:
        report["regime"] = "large"
        rhs = min_deg / (7 * p0)
        report["inequality"] = {"lhs": 3 * a_sz + b_sz, "rhs": rhs, "holds": 3 * a_sz + b_sz >= rhs}
    return report
