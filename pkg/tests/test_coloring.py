import random
from itertools import product

import pytest

from hyperspec import (
    complete_subsets,
    compose,
    compositional_mono_edge,
    cover_number,
    fano,
    find_2_coloring,
    monochromatic_edge,
    new_hypergraph,
    ramsey_clique_hypergraph,
    random_refute,
    random_uniform,
    three_coloring_intersecting,
)
from hyperspec.coloring import ColorStatus
from hyperspec.errors import (
    CompositionWitnessError,
    LengthMismatchError,
    NonUniformError,
    NotIntersectingError,
)

import oracles


class TestMonochromaticEdge:
    def test_all_same_color(self, fano_h):
        assert monochromatic_edge(fano_h, [0] * 7) == 0

    def test_triangle(self):
        tri = complete_subsets(3, 2)
        assert tri.edge_vertices(0) == (0, 1)
        assert monochromatic_edge(tri, (0, 0, 1)) == 0

    def test_every_coloring_of_k5_pairs_has_mono(self):
        h = complete_subsets(5, 2)
        for colors in product((0, 1), repeat=5):
            # pigeonhole: 5 vertices, 2 colors, some pair repeats
            assert monochromatic_edge(h, colors) is not None

    def test_none_when_proper(self, fano_h):
        proper = three_coloring_intersecting(fano_h)
        assert monochromatic_edge(fano_h, proper) is None

    def test_length_mismatch(self, fano_h):
        with pytest.raises(LengthMismatchError):
            monochromatic_edge(fano_h, [0, 1])


class TestFind2Coloring:
    def test_fano_not_colorable(self, fano_h):
        res = find_2_coloring(fano_h)
        assert res.status is ColorStatus.NOT_COLORABLE
        assert oracles.exhaustive_two_coloring(7, list(fano_h.edges())) is None

    def test_single_edge(self):
        res = find_2_coloring(new_hypergraph(3, [{0, 1, 2}]))
        assert res.status is ColorStatus.COLORABLE
        assert len(set(res.coloring)) == 2

    def test_witness_always_verified(self):
        from math import comb

        rng = random.Random(9)
        for _ in range(40):
            n = rng.randint(3, 10)
            k = rng.randint(2, min(4, n))
            m = max(1, min(rng.randint(1, 12), 2 ** (k - 1) - 1, comb(n, k)))
            h = random_uniform(n, k, m, seed=rng.randrange(1 << 30))
            res = find_2_coloring(h)
            assert res.status is ColorStatus.COLORABLE
            assert monochromatic_edge(h, res.coloring) is None

    def test_agrees_with_oracle_on_random_instances(self):
        rng = random.Random(10)
        for _ in range(25):
            n = rng.randint(3, 9)
            k = rng.randint(2, min(4, n))
            m = rng.randint(2, 14)
            try:
                h = random_uniform(n, k, m, seed=rng.randrange(1 << 30))
            except Exception:
                continue
            res = find_2_coloring(h)
            oracle = oracles.exhaustive_two_coloring(n, list(h.edges()))
            assert (res.status is ColorStatus.COLORABLE) == (oracle is not None)

    def test_unknown_on_tiny_budget(self, itf2):
        res = find_2_coloring(itf2, budget_nodes=5)
        assert res.status is ColorStatus.UNKNOWN
        assert res.coloring is None

    def test_empty_hypergraph(self):
        res = find_2_coloring(new_hypergraph(3, []))
        assert res.status is ColorStatus.COLORABLE

    def test_nodes_counted(self, fano_h):
        assert find_2_coloring(fano_h).nodes > 0


class TestRandomRefute:
    def test_fano_fraction_one(self, fano_h):
        rep = random_refute(fano_h, trials=2000, seed=11)
        assert rep.mono_fraction == 1.0

    def test_single_edge_expectation(self):
        k = 5
        h = new_hypergraph(k, [set(range(k))])
        rep = random_refute(h, trials=10_000, seed=13)
        assert abs(rep.mean_mono_edges - 2 ** (1 - k)) < 0.01

    def test_deterministic(self, fano_h):
        a = random_refute(fano_h, trials=500, seed=21)
        b = random_refute(fano_h, trials=500, seed=21)
        assert a == b

    def test_matches_oracle_counts(self):
        h = complete_subsets(5, 3)
        rep = random_refute(h, trials=200, seed=3)
        rng = random.Random(3)
        edges = list(h.edges())
        total = 0
        mono = 0
        for _ in range(200):
            bits = rng.getrandbits(5)
            colors = [(bits >> v) & 1 for v in range(5)]
            c = oracles.mono_edge_count(edges, colors)
            total += c
            mono += c > 0
        assert rep.total_mono_edges == total
        assert rep.mono_trials == mono


class TestThreeColoring:
    def test_fano(self, fano_h):
        colors = three_coloring_intersecting(fano_h)
        assert monochromatic_edge(fano_h, colors) is None
        line0 = set(fano_h.edge_vertices(0))
        assert {colors[v] for v in line0} == {1, 2}
        assert all(colors[v] == 0 for v in range(7) if v not in line0)

    def test_single_edge_of_size_two(self):
        h = new_hypergraph(2, [{0, 1}])
        assert three_coloring_intersecting(h) == (1, 2)

    def test_iterated_fano(self, itf2):
        colors = three_coloring_intersecting(itf2)
        assert monochromatic_edge(itf2, colors) is None

    def test_not_intersecting_rejected(self):
        with pytest.raises(NotIntersectingError):
            three_coloring_intersecting(new_hypergraph(4, [{0, 1}, {2, 3}]))

    def test_non_uniform_rejected(self):
        with pytest.raises(NonUniformError):
            three_coloring_intersecting(new_hypergraph(3, [{0, 1}, {0, 1, 2}]))


class TestCoverNumber:
    def test_fano(self, fano_h):
        assert cover_number(fano_h) == 3
        assert oracles.naive_cover_number(7, list(fano_h.edges())) == 3

    def test_single_edge(self):
        assert cover_number(new_hypergraph(4, [{1, 2}])) == 1

    def test_complete_subsets(self):
        h = complete_subsets(5, 3)
        assert cover_number(h) == 3
        assert oracles.naive_cover_number(5, list(h.edges())) == 3

    def test_matches_oracle_random(self):
        rng = random.Random(17)
        for _ in range(15):
            n = rng.randint(3, 8)
            k = rng.randint(1, min(3, n))
            m = rng.randint(1, 8)
            try:
                h = random_uniform(n, k, m, seed=rng.randrange(1 << 30))
            except Exception:
                continue
            assert cover_number(h) == oracles.naive_cover_number(n, list(h.edges()))

    def test_budget_exhaustion_returns_none(self, itf2):
        assert cover_number(itf2, budget_nodes=3) is None

    def test_at_most_k_for_uniform_intersecting(self, fano_h):
        assert cover_number(fano_h) <= 3


class TestCompositionalMonoEdge:
    def test_every_coloring_of_triangle_product(self):
        tri = complete_subsets(3, 2)
        prod = compose(tri, tri)
        edges = list(prod.edges())
        for bits in range(2**9):
            colors = [(bits >> v) & 1 for v in range(9)]
            idx = compositional_mono_edge(tri, tri, prod, colors)
            assert len({colors[v] for v in prod.edge_vertices(idx)}) == 1
            assert oracles.mono_edge_count(edges, colors) >= 1

    def test_random_colorings_on_iterated_fano(self, fano_h, itf2):
        rng = random.Random(23)
        for _ in range(300):
            colors = [rng.randrange(2) for _ in range(49)]
            idx = compositional_mono_edge(fano_h, fano_h, itf2, colors)
            assert len({colors[v] for v in itf2.edge_vertices(idx)}) == 1

    def test_colorable_inner_detected(self):
        # A single-edge inner factor is 2-colorable, so some copy has no
        # forced monochromatic inner edge under a suitable coloring.
        tri = complete_subsets(3, 2)
        inner = new_hypergraph(2, [{0, 1}])
        prod = compose(tri, inner)
        colors = [0, 1] * 3
        with pytest.raises(CompositionWitnessError):
            compositional_mono_edge(tri, inner, prod, colors)

    def test_size_mismatch(self, fano_h, itf2):
        with pytest.raises(LengthMismatchError):
            compositional_mono_edge(fano_h, fano_h, itf2, [0] * 10)


class TestSparseColorability:
    def test_sparse_uniform_hypergraphs_colorable(self):
        # Fewer than 2^(k-1) edges forces colorability.
        from math import comb

        rng = random.Random(31)
        for _ in range(30):
            k = rng.randint(2, 6)
            n = rng.randint(k + 1, 2 * k + 2)
            m = max(1, min(2 ** (k - 1) - 1, 10, comb(n, k)))
            h = random_uniform(n, k, m, seed=rng.randrange(1 << 30))
            assert find_2_coloring(h).status is ColorStatus.COLORABLE

    def test_folklore_one_in_spectrum(self):
        from hyperspec import intersection_spectrum

        corpus = [
            fano(),
            complete_subsets(3, 2),
            complete_subsets(5, 3),
            ramsey_clique_hypergraph(6, 3),
        ]
        for h in corpus:
            assert find_2_coloring(h).status is ColorStatus.NOT_COLORABLE
            assert 1 in intersection_spectrum(h).sizes
