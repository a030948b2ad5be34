"""Undirected simple graphs with dense integer vertex ids.

Vertices are 0..n-1; edges are normalized (min, max) pairs so that edge
sets from different phases of the decomposition can be compared exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple graph backed by an edge set plus per-vertex neighbor sets."""

    __slots__ = ("n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._edges: set[tuple[int, int]] = set()
        for u, v in edges:
            self.add_edge(u, v)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return cls(n, ((i, (i + 1) % n) for i in range(n)))

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g._edges = set(self._edges)
        g._adj = [set(s) for s in self._adj]
        return g

    # -- mutation (use only on private copies) --------------------------------

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range: {(u, v)}")
        e = norm_edge(u, v)
        if e in self._edges:
            return
        self._edges.add(e)
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self._edges.remove(norm_edge(u, v))
        self._adj[u].remove(v)
        self._adj[v].remove(u)

    # -- queries --------------------------------------------------------------

    @property
    def edges(self) -> set[tuple[int, int]]:
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self._edges

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def adj(self, v: int) -> set[int]:
        """Neighbor set; treat as read-only."""
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        """Neighbors in ascending order (deterministic iteration)."""
        return sorted(self._adj[v])

    def min_degree(self) -> int:
        return min((len(s) for s in self._adj), default=0)

    def max_degree(self) -> int:
        return max((len(s) for s in self._adj), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    # -- structural predicates ------------------------------------------------

    def edge_count_between(self, a: Iterable[int], b: Iterable[int]) -> int:
        """Number of edges with one endpoint in a and the other in b.

        When a == b this is the number of edges inside a, counted once.
        """
        a = set(a)
        b = set(b)
        if not a or not b:
            return 0
        if a.isdisjoint(b):
            small, big = (a, b) if len(a) <= len(b) else (b, a)
            return sum(len(self._adj[u] & big) for u in small)
        seen = {norm_edge(u, v) for u in a for v in self._adj[u] & b}
        seen |= {norm_edge(u, v) for u in b for v in self._adj[u] & a}
        return len(seen)

    def boundary(self, a: Iterable[int]) -> set[int]:
        """Vertices outside a adjacent to some vertex of a."""
        a = set(a)
        out: set[int] = set()
        for u in a:
            out |= self._adj[u]
        return out - a

    def components(self, restrict: Iterable[int] | None = None) -> list[set[int]]:
        """Connected components of the subgraph induced on restrict.

        The induced subgraph is taken as a view; no copy is made.
        """
        allowed = set(range(self.n)) if restrict is None else set(restrict)
        comps: list[set[int]] = []
        unseen = set(allowed)
        while unseen:
            root = min(unseen)
            comp = {root}
            stack = [root]
            unseen.discard(root)
            while stack:
                u = stack.pop()
                for w in self._adj[u] & unseen:
                    unseen.discard(w)
                    comp.add(w)
                    stack.append(w)
            comps.append(comp)
        return comps

    def verify_hamilton_cycle(self, cyc: Sequence[int]) -> bool:
        if len(cyc) != self.n or self.n < 3:
            return False
        if len(set(cyc)) != self.n:
            return False
        return all(self.has_edge(cyc[i], cyc[(i + 1) % self.n]) for i in range(self.n))

    # -- serialization: "n m" header then one "u v" line per edge -------------

    def to_text(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        lines.extend(f"{u} {v}" for u, v in sorted(self._edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        n, m = map(int, lines[0].split())
        g = cls(n)
        for ln in lines[1 : m + 1]:
            u, v = map(int, ln.split())
            g.add_edge(u, v)
        if g.num_edges != m:
            raise ValueError(f"header claims {m} edges, parsed {g.num_edges}")
        return g


# -- cycle covers and broken 2-factors ---------------------------------------

CycleCover = list  # list of vertex sequences, each closing on itself


def cycle_cover_edges(cycles: Iterable[Sequence[int]]) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for cyc in cycles:
        k = len(cyc)
        for i in range(k):
            out.add(norm_edge(cyc[i], cyc[(i + 1) % k]))
    return out


def path_edges(path: Sequence[int]) -> set[tuple[int, int]]:
    return {norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)}


def check_cycle_cover(g: Graph, cycles: Iterable[Sequence[int]], spanning: bool = True) -> None:
    """Raise ValueError unless cycles are vertex-disjoint cycles of g."""
    seen: set[int] = set()
    for cyc in cycles:
        if len(cyc) < 3:
            raise ValueError(f"cycle of length {len(cyc)} < 3")
        for i, u in enumerate(cyc):
            if u in seen:
                raise ValueError(f"vertex {u} repeated across cycles")
            seen.add(u)
            v = cyc[(i + 1) % len(cyc)]
            if not g.has_edge(u, v):
                raise ValueError(f"({u},{v}) not an edge of the host")
    if spanning and seen != set(range(g.n)):
        raise ValueError("cycle cover is not spanning")


@dataclass
class BrokenTwoFactor:
    """Vertex-disjoint cycles plus one long path, jointly spanning the host.

    Cycles keep a stored orientation; the long path's tail (last element) is
    the moving endpoint for rotations.
    """

    n: int
    cycles: list[list[int]] = field(default_factory=list)
    path: list[int] = field(default_factory=list)

    def edges(self) -> set[tuple[int, int]]:
        return cycle_cover_edges(self.cycles) | path_edges(self.path)

    def offpath_vertices(self) -> set[int]:
        out: set[int] = set()
        for cyc in self.cycles:
            out.update(cyc)
        return out

    def cycle_index_of(self, v: int) -> int | None:
        for i, cyc in enumerate(self.cycles):
            if v in cyc:
                return i
        return None

    def validate(self, host: Graph | None = None) -> None:
        if not self.path:
            raise ValueError("long path must be nonempty")
        seen = set(self.path)
        if len(seen) != len(self.path):
            raise ValueError("repeated vertex on long path")
        for cyc in self.cycles:
            if len(cyc) < 3:
                raise ValueError("cycle shorter than 3")
            for u in cyc:
                if u in seen:
                    raise ValueError(f"vertex {u} appears twice")
                seen.add(u)
        if seen != set(range(self.n)):
            raise ValueError("structure does not span all vertices")
        if host is not None:
            for u, v in self.edges():
                if not host.has_edge(u, v):
                    raise ValueError(f"({u},{v}) missing from host")
