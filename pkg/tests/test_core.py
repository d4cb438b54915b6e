import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperspec import (
    Hypergraph,
    edges_containing,
    intersection_spectrum,
    is_intersecting,
    is_uniform,
    lambda_across,
    lambda_within,
    parse_hypergraph,
    serialize_hypergraph,
)
from hyperspec.core import mask_of, vertices_of
from hyperspec.errors import (
    DuplicateEdgeError,
    EmptyEdgeError,
    EmptyHypergraphError,
    EmptySetError,
    OutOfRangeVertexError,
    OverlappingSetsError,
    ParseError,
    TooFewEdgesError,
)

import oracles

FANO_LINES = [{i, (i + 1) % 7, (i + 3) % 7} for i in range(7)]


def small_hypergraphs():
    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=8))
        num_edges = draw(st.integers(min_value=1, max_value=8))
        edges = []
        seen = set()
        for _ in range(num_edges):
            size = draw(st.integers(min_value=1, max_value=n))
            edge = frozenset(draw(st.permutations(range(n)))[:size])
            if edge not in seen:
                seen.add(edge)
                edges.append(edge)
        return Hypergraph(n, edges)

    return build()


class TestConstruction:
    def test_fano_by_hand(self):
        h = Hypergraph(7, FANO_LINES)
        assert h.num_vertices == 7 and h.num_edges == 7
        assert is_uniform(h) == 3

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateEdgeError):
            Hypergraph(3, [{0, 1}, {0, 1}])

    def test_out_of_range_rejected(self):
        with pytest.raises(OutOfRangeVertexError):
            Hypergraph(2, [{0, 5}])

    def test_empty_edge_rejected(self):
        with pytest.raises(EmptyEdgeError):
            Hypergraph(3, [set()])

    def test_edge_order_stable(self):
        h = Hypergraph(5, [{3, 4}, {0, 1}, {2}])
        assert h.edge_vertices(0) == (3, 4)
        assert h.edge_vertices(1) == (0, 1)
        assert h.edge_vertices(2) == (2,)

    def test_mask_roundtrip(self):
        assert vertices_of(mask_of([5, 1, 3])) == (1, 3, 5)


class TestUniformIntersecting:
    def test_fano_uniform(self):
        assert is_uniform(Hypergraph(7, FANO_LINES)) == 3

    def test_mixed_sizes(self):
        assert is_uniform(Hypergraph(3, [{0, 1}, {0, 1, 2}])) is None

    def test_single_edge(self):
        assert is_uniform(Hypergraph(5, [{0, 1, 2, 3, 4}])) == 5

    def test_empty_raises(self):
        with pytest.raises(EmptyHypergraphError):
            is_uniform(Hypergraph(3, []))

    def test_fano_intersecting(self):
        assert is_intersecting(Hypergraph(7, FANO_LINES))

    def test_disjoint_pairs(self):
        assert not is_intersecting(Hypergraph(5, [{0, 1}, {2, 3}]))

    def test_single_edge_vacuous(self):
        assert is_intersecting(Hypergraph(2, [{0, 1}]))


class TestSpectrum:
    def test_fano_spectrum(self):
        h = Hypergraph(7, FANO_LINES)
        sp = intersection_spectrum(h)
        assert sp.sizes == (1,)
        assert sp.multiplicities == (21,)
        assert sp.r == 1

    def test_two_disjoint_edges(self):
        sp = intersection_spectrum(Hypergraph(4, [{0, 1}, {2, 3}]))
        assert sp.sizes == (0,)

    def test_too_few(self):
        with pytest.raises(TooFewEdgesError):
            intersection_spectrum(Hypergraph(3, [{0, 1}]))

    def test_against_oracle_random(self):
        rng = random.Random(20240501)
        for _ in range(30):
            n = rng.randint(2, 10)
            m = rng.randint(2, min(12, 2**n - 1))
            edges = set()
            while len(edges) < m:
                size = rng.randint(1, n)
                edges.add(frozenset(rng.sample(range(n), size)))
            edges = list(edges)
            h = Hypergraph(n, edges)
            sp = intersection_spectrum(h)
            expected = oracles.naive_spectrum(edges)
            assert dict(zip(sp.sizes, sp.multiplicities)) == expected
            assert sp.num_pairs == comb(m, 2)
            assert (min(sp.sizes) >= 1) == is_intersecting(h)

    @settings(max_examples=40, deadline=None)
    @given(small_hypergraphs(), st.randoms(use_true_random=False))
    def test_permutation_invariance(self, h, rng):
        if h.num_edges < 2:
            return
        perm = list(range(h.num_vertices))
        rng.shuffle(perm)
        relabeled = Hypergraph(
            h.num_vertices, [{perm[v] for v in e} for e in h.edges()]
        )
        a = intersection_spectrum(h)
        b = intersection_spectrum(relabeled)
        assert a.sizes == b.sizes and a.multiplicities == b.multiplicities


class TestLambdas:
    def test_fano_within(self):
        h = Hypergraph(7, FANO_LINES)
        assert lambda_within(h, range(7)) == 1

    def test_single_pair(self):
        h = Hypergraph(6, [{0, 1, 2}, {0, 1, 3}, {4, 5}])
        assert lambda_within(h, [0, 1]) == 2

    def test_mean_of_three(self):
        # pairwise sizes 1, 2, 3 average to exactly 2
        h = Hypergraph(
            9, [{0, 1, 2, 3, 4}, {4, 5, 6, 7, 8}, {0, 1, 5, 6, 7}]
        )
        assert lambda_within(h, [0, 1, 2]) == 2

    def test_within_needs_two(self):
        h = Hypergraph(3, [{0, 1}])
        with pytest.raises(TooFewEdgesError):
            lambda_within(h, [0])

    def test_across_fano(self):
        h = Hypergraph(7, FANO_LINES)
        assert lambda_across(h, [0, 1, 2], [3, 4, 5, 6]) == 1

    def test_across_disjoint_edges(self):
        h = Hypergraph(4, [{0, 1}, {2, 3}])
        assert lambda_across(h, [0], [1]) == 0

    def test_across_errors(self):
        h = Hypergraph(7, FANO_LINES)
        with pytest.raises(OverlappingSetsError):
            lambda_across(h, [0, 1], [1, 2])
        with pytest.raises(EmptySetError):
            lambda_across(h, [], [1])

    def test_union_identity_random(self):
        rng = random.Random(777)
        for _ in range(40):
            n = rng.randint(4, 10)
            m = rng.randint(4, 10)
            edges = set()
            while len(edges) < m:
                edges.add(frozenset(rng.sample(range(n), rng.randint(1, n))))
            h = Hypergraph(n, list(edges))
            idx = list(range(m))
            rng.shuffle(idx)
            split = rng.randint(2, m - 2)
            s, t = idx[:split], idx[split:]
            if len(s) < 2 or len(t) < 2:
                continue
            union = s + t
            lhs = lambda_within(h, union) * comb(len(union), 2)
            rhs = (
                lambda_within(h, s) * comb(len(s), 2)
                + lambda_within(h, t) * comb(len(t), 2)
                + lambda_across(h, s, t) * len(s) * len(t)
            )
            assert lhs == rhs

    def test_exactness(self):
        h = Hypergraph(5, [{0, 1, 2}, {1, 2, 3}, {2, 3, 4}])
        val = lambda_within(h, range(3))
        assert isinstance(val, Fraction)
        assert val == Fraction(5, 3)
        assert val == oracles.naive_lambda_within([{0, 1, 2}, {1, 2, 3}, {2, 3, 4}], range(3))


class TestEdgesContaining:
    def test_fano_point(self):
        h = Hypergraph(7, FANO_LINES)
        for v in range(7):
            assert len(edges_containing(h, [v])) == 3

    def test_empty_set_gives_all(self):
        h = Hypergraph(7, FANO_LINES)
        assert edges_containing(h, []) == frozenset(range(7))

    def test_full_line_gives_itself(self):
        h = Hypergraph(7, FANO_LINES)
        for i in range(7):
            assert edges_containing(h, h.edge_vertices(i)) == {i}


class TestTextFormat:
    def test_round_trip_canonical(self):
        h = Hypergraph(7, FANO_LINES)
        text = serialize_hypergraph(h)
        assert serialize_hypergraph(parse_hypergraph(text)) == text
        assert text.endswith("\n") and " \n" not in text

    def test_header_and_fano_fixture(self):
        text = "# the plane of order two\n7 7\n" + "\n".join(
            " ".join(map(str, sorted(line))) for line in FANO_LINES
        )
        h = parse_hypergraph(text)
        assert h.num_edges == 7 and is_uniform(h) == 3
        assert intersection_spectrum(h).sizes == (1,)

    def test_malformed_token(self):
        with pytest.raises(ParseError) as err:
            parse_hypergraph("2 1\n0 x\n")
        assert err.value.line == 2

    def test_wrong_edge_count(self):
        with pytest.raises(ParseError):
            parse_hypergraph("3 2\n0 1\n")

    def test_not_ascending(self):
        with pytest.raises(ParseError):
            parse_hypergraph("3 1\n1 0\n")

    def test_out_of_range_index(self):
        with pytest.raises(ParseError):
            parse_hypergraph("2 1\n0 4\n")

    @settings(max_examples=30, deadline=None)
    @given(small_hypergraphs())
    def test_parse_serialize_identity(self, h):
        again = parse_hypergraph(serialize_hypergraph(h))
        assert again.num_vertices == h.num_vertices
        assert set(again.edge_masks) == set(h.edge_masks)
