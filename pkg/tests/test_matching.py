"""Matching kernels against the exhaustive reference matcher."""
import random

from hypothesis import given, settings, strategies as st

from hamdecomp.graph import Graph
from hamdecomp.matching import (
    brute_max_matching_size,
    greedy_matching,
    hopcroft_karp,
    is_perfect,
    matching_pairs,
    max_matching_general,
)


def _adj(g: Graph) -> list[list[int]]:
    return [g.neighbors(v) for v in range(g.n)]


def _check_valid(adj, match):
    for v, u in enumerate(match):
        if u != -1:
            assert match[u] == v
            assert u in adj[v]


class TestGeneralMatching:
    def test_c6_perfect(self):
        match = max_matching_general(_adj(Graph.cycle(6)))
        assert is_perfect(match)
        assert len(matching_pairs(match)) == 3

    def test_star_not_perfect(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])  # K_{1,3}
        match = max_matching_general(_adj(g))
        assert len(matching_pairs(match)) == 1
        assert not is_perfect(match)

    def test_petersen_perfect(self):
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        g = Graph(10, outer + spokes + inner)
        match = max_matching_general(_adj(g))
        assert is_perfect(match)
        _check_valid(_adj(g), match)

    def test_odd_blossom(self):
        # triangle with a pendant: maximum matching has size 2
        g = Graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        match = max_matching_general(_adj(g))
        assert len(matching_pairs(match)) == 2

    def test_seeded_init_respected(self):
        g = Graph.cycle(6)
        init = [-1] * 6
        init[0], init[1] = 1, 0
        match = max_matching_general(_adj(g), init=init)
        assert is_perfect(match)

    @given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=200))
    @settings(max_examples=120, deadline=None)
    def test_maximality_vs_brute(self, n, seed):
        rnd = random.Random(seed)
        g = Graph(n)
        for u in range(n):
            for v in range(u + 1, n):
                if rnd.random() < 0.45:
                    g.add_edge(u, v)
        adj = _adj(g)
        match = max_matching_general(adj)
        _check_valid(adj, match)
        assert len(matching_pairs(match)) == brute_max_matching_size(adj)


class TestGreedy:
    def test_is_maximal(self):
        g = Graph.cycle(7)
        adj = _adj(g)
        match = greedy_matching(adj)
        _check_valid(adj, match)
        for u, v in g.edges:
            assert match[u] != -1 or match[v] != -1


class TestHopcroftKarp:
    def test_unique_matching(self):
        match = hopcroft_karp([[0], [1], [2]], 3)
        assert match == [0, 1, 2]

    def test_complete_bipartite(self):
        match = hopcroft_karp([[0, 1, 2, 3]] * 4, 4)
        assert sorted(match) == [0, 1, 2, 3]

    def test_deficient_side(self):
        match = hopcroft_karp([[0], [0]], 1)
        assert sorted(match) == [-1, 0]

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=100))
    @settings(max_examples=80, deadline=None)
    def test_regular_bipartite_has_perfect_matching(self, n, seed):
        # a random permutation-union construction is d-regular, so a perfect
        # matching must exist (Hall / Koenig)
        rnd = random.Random(seed)
        d = rnd.randint(1, n)
        adj = [set() for _ in range(n)]
        cols = list(range(n))
        tries = 0
        built = 0
        while built < d and tries < 200:
            tries += 1
            rnd.shuffle(cols)
            if all(cols[x] not in adj[x] for x in range(n)):
                for x in range(n):
                    adj[x].add(cols[x])
                built += 1
        match = hopcroft_karp([sorted(s) for s in adj], n)
        assert all(m != -1 for m in match)
        assert len(set(match)) == n
