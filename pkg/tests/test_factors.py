"""Factor engine: degree-factor oracle, slot gadget, extraction, probes."""
import random
from itertools import combinations

import pytest

from hamdecomp.factors import (
    boundary_growth_probe,
    build_gadget,
    extract_r_factor,
    extract_with_retry,
    perfect_matching_general,
    tutte_check_exhaustive,
    tutte_quantities,
)
from hamdecomp.graph import Graph
from hamdecomp.matching import matching_pairs, max_matching_general
from hamdecomp.sampler import Params, sample_gnp, split


def random_graph(n: int, p: float, seed: int) -> Graph:
    rnd = random.Random(seed)
    g = Graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rnd.random() < p:
                g.add_edge(u, v)
    return g


def brute_r_factor_count(g: Graph, r: int) -> int:
    """Count spanning subgraphs with every degree exactly r by edge subsets."""
    edges = sorted(g.edges)
    need = r * g.n
    total = 0
    if need % 2:
        return 0
    for k in range(need // 2, need // 2 + 1):
        for sub in combinations(edges, k):
            deg = [0] * g.n
            for u, v in sub:
                deg[u] += 1
                deg[v] += 1
            if all(d == r for d in deg):
                total += 1
    return total


class TestTutteOracle:
    def test_k4_three_factor(self):
        assert tutte_check_exhaustive(Graph.complete(4), 3).exists

    def test_star_no_one_factor(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])
        verdict = tutte_check_exhaustive(g, 1)
        assert not verdict.exists
        s_set, t_set = verdict.violation
        big_r, big_q = tutte_quantities(g, 1, s_set, t_set)
        assert big_r < big_q

    def test_c6_two_factor(self):
        assert tutte_check_exhaustive(Graph.cycle(6), 2).exists

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            tutte_check_exhaustive(Graph.complete(13), 2)

    def test_quantities_match_bitmask_path(self):
        # cross-check the readable set implementation against the bitmask one
        g = random_graph(6, 0.5, 3)
        for r in (1, 2, 3):
            verdict = tutte_check_exhaustive(g, r)
            if not verdict.exists:
                s_set, t_set = verdict.violation
                big_r, big_q = tutte_quantities(g, r, s_set, t_set)
                assert big_r < big_q


class TestGadget:
    def test_c6_r2_shape(self):
        gadget = build_gadget(Graph.cycle(6), 2)
        # 2 edge-slots and 0 core-slots per vertex
        assert gadget.n_nodes == 12
        assert len(gadget.slot_of) == 6

    def test_k4_r3_forces_all_edges(self):
        g = Graph.complete(4)
        gadget = build_gadget(g, 3)
        match = max_matching_general(gadget.adj)
        assert all(m != -1 for m in match)
        assert gadget.matching_to_factor(match) == g

    def test_k4_r1_matchings_are_perfect_matchings(self):
        g = Graph.complete(4)
        factor = extract_r_factor(g, 1)
        assert factor is not None
        assert all(factor.degree(v) == 1 for v in range(4))

    def test_rejects_r_above_min_degree(self):
        with pytest.raises(ValueError):
            build_gadget(Graph.cycle(5), 3)

    @pytest.mark.parametrize("seed", range(6))
    def test_gadget_soundness_counts(self, seed):
        # distinct factors from gadget perfect matchings == brute enumeration
        g = random_graph(6, 0.6, seed)
        for r in (1, 2):
            if r > g.min_degree() or (r * g.n) % 2:
                continue
            gadget = build_gadget(g, r)
            found: set[frozenset] = set()
            nodes = list(range(gadget.n_nodes))
            # enumerate all perfect matchings of the gadget recursively
            adj_sets = [set(a) for a in gadget.adj]

            def rec(unmatched: list[int], pairs: list[tuple[int, int]]):
                if not unmatched:
                    match = [-1] * gadget.n_nodes
                    for a, b in pairs:
                        match[a], match[b] = b, a
                    f = gadget.matching_to_factor(match)
                    found.add(frozenset(f.edges))
                    return
                v = unmatched[0]
                for u in unmatched[1:]:
                    if u in adj_sets[v]:
                        rest = [w for w in unmatched if w not in (v, u)]
                        rec(rest, pairs + [(v, u)])

            if gadget.n_nodes <= 16:
                rec(nodes, [])
                assert len(found) == brute_r_factor_count(g, r)


class TestPerfectMatchingWrapper:
    def test_c6(self):
        res = perfect_matching_general(Graph.cycle(6))
        assert res.perfect
        assert len(res.pairs()) == 3

    def test_star(self):
        res = perfect_matching_general(Graph(4, [(0, 1), (0, 2), (0, 3)]))
        assert not res.perfect


class TestExtraction:
    def test_c6_identity(self):
        assert extract_r_factor(Graph.cycle(6), 2) == Graph.cycle(6)

    def test_k5_two_factor(self):
        f = extract_r_factor(Graph.complete(5), 2)
        assert f is not None
        assert all(f.degree(v) == 2 for v in range(5))
        assert f.edges <= Graph.complete(5).edges

    def test_odd_parity_rejected(self):
        # r*n odd can never work
        assert extract_r_factor(Graph.complete(5), 3) is None

    def test_flow_fastpath_agrees_with_gadget(self):
        # n >= 40 even-r instance goes through the flow route; the result
        # must still be an exact factor of the host
        g = sample_gnp(60, 0.5, 11)
        f = extract_r_factor(g, 10)
        assert f is not None
        assert all(f.degree(v) == 10 for v in range(60))
        assert f.edges <= g.edges

    def test_oracle_equivalence_small(self):
        disagreements = 0
        for seed in range(40):
            g = random_graph(random.Random(seed).randint(2, 7), 0.5, seed + 1000)
            for r in range(1, max(2, g.min_degree() + 1)):
                if (r * g.n) % 2:
                    continue
                got = extract_r_factor(g, r) is not None
                want = tutte_check_exhaustive(g, r).exists if r <= g.min_degree() else False
                if got != want:
                    disagreements += 1
        assert disagreements == 0

    def test_retry_descends(self):
        # C_6 has min degree 2, so a request at r=6 lands at 2
        f, r = extract_with_retry(Graph.cycle(6), 6)
        assert r == 2 and f == Graph.cycle(6)

    def test_retry_floor(self):
        f, r = extract_with_retry(Graph.cycle(6), 6, floor_r=4)
        assert f is None and r == 0

    def test_pipeline_extraction(self):
        params = Params(n=200, p0=0.4, eta=0.25, seed=2)
        s = split(sample_gnp(params.n, params.p0, params.seed), params)
        f, r = extract_with_retry(s.g1, params.r1)
        assert f is not None
        assert r >= 2 and r % 2 == 0
        assert all(f.degree(v) == r for v in range(params.n))
        assert f.edges <= s.g1.edges


class TestBoundaryProbe:
    def test_complete_singleton(self):
        report = boundary_growth_probe(Graph.complete(20), {0}, 19, 1.0)
        assert report["b"] == 19

    def test_degenerate_full_set(self):
        report = boundary_growth_probe(Graph.complete(5), set(range(5)), 4, 1.0)
        assert report["degenerate"]
        assert report["regime"] is None

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            boundary_growth_probe(Graph.complete(5), set(), 4, 1.0)

    def test_sampled_small_regime(self):
        g = sample_gnp(500, 0.05, 7)
        report = boundary_growth_probe(g, set(range(5)), g.min_degree(), 0.05)
        assert report["regime"] in ("small", "large")
        assert "inequality" in report
