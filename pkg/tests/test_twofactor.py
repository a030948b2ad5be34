"""Two-factor peeling: Euler orientation, bipartite double, matching rounds."""
import pytest

from hamdecomp.factors import extract_with_retry
from hamdecomp.graph import Graph, cycle_cover_edges
from hamdecomp.sampler import Params, sample_gnp, split
from hamdecomp.twofactor import (
    bipartite_double,
    bipartite_perfect_matching,
    cycle_statistics,
    euler_orient,
    matching_to_2factor,
    peel_all,
)


class TestEulerOrient:
    def test_c4(self):
        o = euler_orient(Graph.cycle(4))
        o.validate()
        assert all(len(o.out[v]) == 1 for v in range(4))

    def test_k5(self):
        o = euler_orient(Graph.complete(5))
        o.validate()
        assert all(len(o.out[v]) == 2 for v in range(5))

    def test_rejects_odd_degree(self):
        with pytest.raises(ValueError):
            euler_orient(Graph.complete(4))

    def test_disconnected(self):
        g = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        o = euler_orient(g)
        o.validate()


class TestBipartiteDouble:
    def test_directed_triangle(self):
        b = bipartite_double(euler_orient(Graph.cycle(3)))
        assert b.degrees_regular() == 1
        match = bipartite_perfect_matching(b)
        assert sorted(match) == [0, 1, 2]

    def test_k5_double_regular(self):
        b = bipartite_double(euler_orient(Graph.complete(5)))
        assert b.degrees_regular() == 2

    def test_empty_host(self):
        b = bipartite_double(euler_orient(Graph(0)))
        assert b.degrees_regular() == 0

    def test_matching_failure_reported(self):
        from hamdecomp.twofactor import BipartiteDouble

        b = BipartiteDouble(n=2, adj_x=[[0], []], host=Graph(2))
        with pytest.raises(ValueError):
            bipartite_perfect_matching(b)


class TestMatchingToFactor:
    def test_cn_identity(self):
        b = bipartite_double(euler_orient(Graph.cycle(7)))
        cycles = matching_to_2factor(bipartite_perfect_matching(b), b)
        assert len(cycles) == 1
        assert sorted(cycles[0]) == list(range(7))

    def test_k5_single_five_cycle(self):
        # 5 has no partition into parts >= 3 other than (5)
        b = bipartite_double(euler_orient(Graph.complete(5)))
        cycles = matching_to_2factor(bipartite_perfect_matching(b), b)
        assert [len(c) for c in cycles] == [5]


def _assert_exact_peel(h: Graph, r: int):
    tf = peel_all(h, r)
    assert len(tf.factors) == r // 2
    tf.validate()  # spanning, edge-disjoint, host membership
    union = set()
    for f in tf.factors:
        es = cycle_cover_edges(f)
        assert not (es & union)
        union |= es
        assert all(len(c) >= 3 for c in f)
    assert union == h.edges


class TestPeelAll:
    def test_c6(self):
        _assert_exact_peel(Graph.cycle(6), 2)

    def test_k5(self):
        _assert_exact_peel(Graph.complete(5), 4)

    def test_k7(self):
        _assert_exact_peel(Graph.complete(7), 6)

    def test_rejects_irregular(self):
        with pytest.raises(ValueError):
            peel_all(Graph(3, [(0, 1)]))

    def test_rejects_odd_regular(self):
        with pytest.raises(ValueError):
            peel_all(Graph.complete(4))

    def test_sampled_factor(self):
        params = Params(n=120, p0=0.5, eta=0.3, seed=4)
        s = split(sample_gnp(params.n, params.p0, params.seed), params)
        f, r = extract_with_retry(s.g1, params.r1)
        assert f is not None
        _assert_exact_peel(f, r)


class TestCycleStatistics:
    def test_single_hamilton_factor(self):
        from hamdecomp.twofactor import TwoFactorSet

        tf = TwoFactorSet(host=Graph.cycle(6), factors=[[[0, 1, 2, 3, 4, 5]]])
        stats = cycle_statistics(tf)
        assert stats["per_factor"] == [1]
        assert stats["min"] == stats["max"] == 1

    def test_triangle_cover_max_count(self):
        g = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        from hamdecomp.twofactor import TwoFactorSet

        tf = TwoFactorSet(host=g, factors=[[[0, 1, 2], [3, 4, 5]]])
        assert cycle_statistics(tf)["max"] == 2

    def test_k0_fraction(self):
        params = Params(n=100, p0=0.5, eta=0.25)
        from hamdecomp.twofactor import TwoFactorSet

        tf = TwoFactorSet(host=Graph.cycle(6), factors=[[[0, 1, 2, 3, 4, 5]]])
        stats = cycle_statistics(tf, params)
        assert stats["fraction_within_k0"] == 1.0
