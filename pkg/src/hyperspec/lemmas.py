"""Exact-arithmetic checkers for the averaging facts behind the extraction
machinery, plus the greedy common-vertex growth procedure.

Every check returns an :class:`InequalityReport` with exact rational sides;
``holds`` being False on valid input signals an implementation bug, and the
randomized suites treat it as such.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional

from .core import (
    Hypergraph,
    edges_containing,
    is_intersecting,
    is_uniform,
    lambda_across,
    lambda_within,
    mask_of,
    vertices_of,
)
from .coloring import monochromatic_edge
from .errors import (
    MismatchedEdgeCountError,
    MismatchedVertexCountError,
    NoDisjointEdgeError,
    NonUniformError,
    NotIntersectingError,
    SizeMismatchError,
    StepOutOfRangeError,
    TooFewEdgesError,
    WitnessViolationError,
)
from .rng import substream

__all__ = [
    "InequalityReport",
    "GreedyStep",
    "GreedyResult",
    "LambdaPairValidation",
    "check_pair_inequality",
    "check_average_lambda",
    "greedy_increase",
    "is_lambda_small",
    "validate_lambda_pair",
    "random_pair_instance",
    "planted_average_instance",
    "run_lemma_suite",
]


@dataclass(frozen=True)
class InequalityReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    slack: Fraction


def _pair_sum(masks: list[int]) -> int:
    total = 0
    for i in range(len(masks) - 1):
        a = masks[i]
        for b in masks[i + 1 :]:
            total += (a & b).bit_count()
    return total


def check_pair_inequality(fam_a: Hypergraph, fam_b: Hypergraph) -> InequalityReport:
    """Within-family pair sums dominate the cross sum minus l(k+k')/2.

    The cross sum runs over all ordered pairs, coincident edges included.
    A second evaluation via per-vertex degree counts must agree exactly;
    disagreement raises, since both routes count the same quantities.
    """
    k = is_uniform(fam_a)
    kp = is_uniform(fam_b)
    if k is None or kp is None:
        raise NonUniformError("both families must be uniform")
    if fam_a.num_vertices != fam_b.num_vertices:
        raise MismatchedVertexCountError(
            f"{fam_a.num_vertices} != {fam_b.num_vertices} vertices"
        )
    ell = fam_a.num_edges
    if ell != fam_b.num_edges:
        raise MismatchedEdgeCountError(f"{ell} != {fam_b.num_edges} edges")

    masks_a = list(fam_a.edge_masks)
    masks_b = list(fam_b.edge_masks)
    within = _pair_sum(masks_a) + _pair_sum(masks_b)
    cross = 0
    for ma in masks_a:
        for mb in masks_b:
            cross += (ma & mb).bit_count()
    lhs = Fraction(within)
    rhs = cross - Fraction(ell * (k + kp), 2)

    # Degree-count re-derivation of all three ingredients.
    n = fam_a.num_vertices
    deg_within = 0
    deg_cross = 0
    deg_sizes = Fraction(0)
    for v in range(n):
        bit = 1 << v
        a_v = sum(1 for m in masks_a if m & bit)
        b_v = sum(1 for m in masks_b if m & bit)
        deg_within += comb(a_v, 2) + comb(b_v, 2)
        deg_cross += a_v * b_v
        deg_sizes += Fraction(a_v + b_v, 2)
    if deg_within != within or deg_cross != cross or deg_sizes != Fraction(ell * (k + kp), 2):
        raise AssertionError("pair-sum and degree-count evaluations disagree")

    return InequalityReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs, slack=lhs - rhs)


def check_average_lambda(
    h: Hypergraph,
    s: Iterable[int],
    t: Iterable[int],
    w: Iterable[int],
) -> InequalityReport:
    """(lambda_S + lambda_T)/2 >= lambda_{S,T} + x/2 - k/(l-1) for disjoint
    equal-size edge sets S, T and x vertices lying in every S edge and no
    T edge."""
    k = is_uniform(h)
    if k is None:
        raise NonUniformError("the host hypergraph must be uniform")
    s_idx = frozenset(s)
    t_idx = frozenset(t)
    if len(s_idx) != len(t_idx):
        raise SizeMismatchError(f"|S|={len(s_idx)} differs from |T|={len(t_idx)}")
    ell = len(s_idx)
    if ell < 2:
        raise TooFewEdgesError("need at least two edges per side")
    w_mask = mask_of(w)
    for i in s_idx:
        if h.edge_mask(i) & w_mask != w_mask:
            raise WitnessViolationError(f"edge {i} in S misses a common vertex")
    for j in t_idx:
        if h.edge_mask(j) & w_mask:
            raise WitnessViolationError(f"edge {j} in T touches the common vertex set")
    x = w_mask.bit_count()
    lhs = (lambda_within(h, s_idx) + lambda_within(h, t_idx)) / 2
    rhs = lambda_across(h, s_idx, t_idx) + Fraction(x, 2) - Fraction(k, ell - 1)
    return InequalityReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs, slack=lhs - rhs)


@dataclass(frozen=True)
class GreedyStep:
    added_vertex: int
    disjoint_edge: int
    count_before: int
    count_after: int


@dataclass(frozen=True)
class GreedyResult:
    final_set: frozenset[int]
    fraction: Fraction
    steps: tuple[GreedyStep, ...]


def greedy_increase(h: Hypergraph, start: Iterable[int], steps: int) -> GreedyResult:
    """Grow a vertex set by ``steps`` vertices, keeping at least a 1/k
    fraction of its containing edges per step.

    Each round picks the smallest-index edge disjoint from the current set
    (if none exists, the set-vs-rest split 2-colors the hypergraph and a
    :class:`NoDisjointEdgeError` carries that witness) and absorbs the
    disjoint edge's most popular vertex, ties to the smallest index. The
    returned fraction is exact and at least k^-steps.
    """
    k = is_uniform(h)
    if k is None:
        raise NonUniformError("greedy growth needs a uniform hypergraph")
    if not is_intersecting(h):
        raise NotIntersectingError("greedy growth needs an intersecting hypergraph")
    base = frozenset(start)
    if steps < 0 or steps > k - len(base):
        raise StepOutOfRangeError(f"steps must lie in [0, {k - len(base)}], got {steps}")
    masks = h.edge_masks
    cur_mask = mask_of(base)
    base_count = sum(1 for m in masks if m & cur_mask == cur_mask)
    count = base_count
    trace: list[GreedyStep] = []
    cur = set(base)
    for _ in range(steps):
        disjoint_edge = next(
            (i for i, m in enumerate(masks) if not m & cur_mask), None
        )
        if disjoint_edge is None:
            witness = tuple(0 if v in cur else 1 for v in range(h.num_vertices))
            if monochromatic_edge(h, witness) is not None:
                raise AssertionError("implied 2-coloring is improper")
            raise NoDisjointEdgeError(frozenset(cur), witness)
        best_v = -1
        best_count = -1
        for v in vertices_of(masks[disjoint_edge]):
            want = cur_mask | (1 << v)
            c = sum(1 for m in masks if m & want == want)
            if c > best_count:
                best_v, best_count = v, c
        trace.append(GreedyStep(best_v, disjoint_edge, count, best_count))
        cur.add(best_v)
        cur_mask |= 1 << best_v
        count = best_count
    fraction = Fraction(count, base_count) if base_count else Fraction(1)
    return GreedyResult(frozenset(cur), fraction, tuple(trace))


def is_lambda_small(h: Hypergraph, s: Iterable[int], lam: int) -> bool:
    """True iff every pair of edges in ``s`` meets in fewer than ``lam``
    vertices."""
    idx = sorted(frozenset(s))
    if len(idx) < 2:
        raise TooFewEdgesError("smallness is a pairwise property; need two edges")
    masks = h.edge_masks
    for i, a in enumerate(idx[:-1]):
        ma = masks[a]
        for b in idx[i + 1 :]:
            if (ma & masks[b]).bit_count() >= lam:
                return False
    return True


@dataclass(frozen=True)
class LambdaPairValidation:
    valid: bool
    violations: tuple[str, ...]
    within_max: Optional[int]
    cross_min: Optional[int]
    y_size: int


def validate_lambda_pair(
    h: Hypergraph,
    x: Iterable[int],
    y: Iterable[int],
    lam: int,
    t: int,
) -> LambdaPairValidation:
    """Check the three pair conditions: |X| = t, within-X intersections at
    most ``lam``, and every X-Y cross intersection at least ``lam``.

    Violations are reported, not raised; the size of Y is reported but not
    enforced.
    """
    x_idx = sorted(frozenset(x))
    y_idx = sorted(frozenset(y))
    violations: list[str] = []
    overlap = set(x_idx) & set(y_idx)
    if overlap:
        violations.append(f"X and Y share edges {sorted(overlap)}")
    if len(x_idx) != t:
        violations.append(f"|X|={len(x_idx)} differs from t={t}")
    masks = h.edge_masks
    within_max: Optional[int] = None
    for i, a in enumerate(x_idx[:-1]):
        for b in x_idx[i + 1 :]:
            size = (masks[a] & masks[b]).bit_count()
            within_max = size if within_max is None else max(within_max, size)
    if within_max is not None and within_max > lam:
        violations.append(f"a pair inside X meets in {within_max} > {lam} vertices")
    cross_min: Optional[int] = None
    for a in x_idx:
        ma = masks[a]
        for b in y_idx:
            size = (ma & masks[b]).bit_count()
            cross_min = size if cross_min is None else min(cross_min, size)
    if cross_min is not None and cross_min < lam:
        violations.append(f"a cross pair meets in {cross_min} < {lam} vertices")
    return LambdaPairValidation(
        valid=not violations,
        violations=tuple(violations),
        within_max=within_max,
        cross_min=cross_min,
        y_size=len(y_idx),
    )


# -- randomized suite instances -------------------------------------------


def _random_family(
    rng: random.Random, n: int, k: int, ell: int, forbidden: set[tuple[int, ...]]
) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set(forbidden)
    while len(out) < ell:
        edge = tuple(sorted(rng.sample(range(n), k)))
        if edge not in seen:
            seen.add(edge)
            out.append(edge)
    return out


def random_pair_instance(rng: random.Random) -> tuple[Hypergraph, Hypergraph]:
    """Two uniform families on a shared vertex set with equal edge counts."""
    n = rng.randint(5, 12)
    k = rng.randint(2, min(5, n))
    kp = rng.randint(2, min(5, n))
    cap = min(comb(n, k), comb(n, kp), 15)
    ell = rng.randint(1, cap)
    fam_a = Hypergraph(n, _random_family(rng, n, k, ell, set()))
    fam_b = Hypergraph(n, _random_family(rng, n, kp, ell, set()))
    return fam_a, fam_b


def planted_average_instance(
    rng: random.Random, x: int
) -> tuple[Hypergraph, frozenset[int], frozenset[int], frozenset[int]]:
    """A uniform hypergraph with x planted vertices common to every S edge
    and absent from every T edge."""
    k = rng.randint(max(2, x + 1), x + 5)
    ell = rng.randint(2, 6)
    # Universe wide enough that ell distinct edges exist on each side even
    # when k - x = 1.
    n = x + k + ell + rng.randint(2, 6)
    w = tuple(range(x))
    rest = range(x, n)
    s_edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    while len(s_edges) < ell:
        edge = w + tuple(sorted(rng.sample(rest, k - x)))
        if edge not in seen:
            seen.add(edge)
            s_edges.append(edge)
    t_edges = _random_family(rng, n - x, k, ell, set())
    t_edges = [tuple(v + x for v in e) for e in t_edges]
    if x == 0:
        while any(e in seen for e in t_edges):
            t_edges = [
                tuple(v + x for v in e)
                for e in _random_family(rng, n - x, k, ell, seen)
            ]
    h = Hypergraph(n, s_edges + t_edges)
    return (
        h,
        frozenset(range(ell)),
        frozenset(range(ell, 2 * ell)),
        frozenset(w),
    )


def run_lemma_suite(seed: int, instances: int) -> dict:
    """Randomized pass/fail summary for the two inequality checkers plus a
    greedy growth spot check. Worst slacks are reported exactly."""
    rng_pairs = substream(seed, "suite/pair-inequality")
    rng_avg = substream(seed, "suite/average-lambda")
    results: dict = {"seed": seed, "instances": instances}

    worst: Optional[Fraction] = None
    passes = 0
    for _ in range(instances):
        fam_a, fam_b = random_pair_instance(rng_pairs)
        report = check_pair_inequality(fam_a, fam_b)
        passes += report.holds
        worst = report.slack if worst is None else min(worst, report.slack)
    results["pair_inequality"] = {
        "pass": passes,
        "fail": instances - passes,
        "worst_slack": str(worst),
    }

    worst = None
    passes = 0
    for i in range(instances):
        h, s, t, w = planted_average_instance(rng_avg, x=i % 6)
        report = check_average_lambda(h, s, t, w)
        passes += report.holds
        worst = report.slack if worst is None else min(worst, report.slack)
    results["average_lambda"] = {
        "pass": passes,
        "fail": instances - passes,
        "worst_slack": str(worst),
    }

    from .constructions import fano  # local import to avoid a cycle

    h = fano()
    greedy_ok = 0
    for i in range(4):
        res = greedy_increase(h, (), i)
        greedy_ok += res.fraction >= Fraction(1, 3**i)
    results["greedy_increase"] = {"pass": greedy_ok, "fail": 4 - greedy_ok}
    return results
