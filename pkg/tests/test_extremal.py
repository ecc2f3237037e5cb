# -*- coding: utf-8 -*-
from fractions import Fraction
from itertools import combinations

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from pipelines.clique_immersion.src.modules.extremal import (
    density_after_deletion,
    density_drop_ok,
    find_kst,
    kst_density_report,
)
from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, generate
from pipelines.clique_immersion.src.modules.graph_core import Graph
from tests.conftest import complete, cycle


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_polarity_graphs_are_c4_free(q):
    G = generate(GenSpec(GenKind.POLARITY_ER, {"q": q}))
    assert G.n == q * q + q + 1
    assert find_kst(G, 2, 2) is None


def test_polarity_three_edge_count():
    assert generate(GenSpec(GenKind.POLARITY_ER, {"q": 3})).m == 24


def test_complete_bipartite_witness():
    G = generate(GenSpec(GenKind.COMPLETE_BIPARTITE, {"a": 2, "b": 3}))
    witness = find_kst(G, 2, 3)
    assert witness is not None
    assert len(witness.left) == 2 and len(witness.right) == 3
    for u in witness.left:
        for v in witness.right:
            assert G.has_edge(u, v)
    assert find_kst(G, 3, 3) is None


def test_parallel_search_agrees():
    G = complete(7)
    assert find_kst(G, 2, 3, workers=2) == find_kst(G, 2, 3)


def test_cycles_contain_c4_only_when_length_four():
    assert find_kst(cycle(4), 2, 2) is not None
    assert find_kst(cycle(5), 2, 2) is None


@pytest.mark.parametrize("s,t", [(3, 2), (1, 2)])
def test_invalid_sides(s, t):
    with pytest.raises(ValueError):
        find_kst(complete(5), s, t)


def test_density_report_ratios():
    G = generate(GenSpec(GenKind.COMPLETE_BIPARTITE, {"a": 4, "b": 4}))
    report = kst_density_report(G, 2, 2, (range(4), range(4, 8)))
    assert report.edges == 16
    assert report.ratio == pytest.approx(16 / 8 ** 1.5)
    assert report.bipartite_ratio == pytest.approx(16 / (4 ** 0.5 * 4))
    assert not report.ksT_bound_exponent_ok
    polarity = generate(GenSpec(GenKind.POLARITY_ER, {"q": 5}))
    assert kst_density_report(polarity, 2, 2).ksT_bound_exponent_ok


def test_density_after_deletion():
    assert density_after_deletion(complete(5), {0}) == 3
    assert density_after_deletion(cycle(6), {0}) == Fraction(8, 5)
    with pytest.raises(ValueError):
        density_after_deletion(complete(2), {0, 1})
    assert density_drop_ok(cycle(6), {0}, 0.2)
    assert not density_drop_ok(cycle(6), {0}, 0.19)


@st.composite
def small_graphs_with_sides(draw):
    n = draw(st.integers(min_value=2, max_value=12))
    pairs = list(combinations(range(n), 2))
    density = draw(st.sampled_from([0.3, 0.5, 0.8]))
    rng = np.random.default_rng(draw(st.integers(min_value=0, max_value=2 ** 32 - 1)))
    chosen = [e for e in pairs if rng.random() < density]
    s = draw(st.integers(min_value=2, max_value=3))
    t = draw(st.integers(min_value=s, max_value=4))
    return Graph.from_edges(n, chosen), s, t


def _has_kst_brute_force(G: Graph, s: int, t: int) -> bool:
    vertices = range(G.n)
    for left in combinations(vertices, s):
        rest = [v for v in vertices if v not in left]
        for right in combinations(rest, t):
            if all(G.has_edge(u, v) for u in left for v in right):
                return True
    return False


@settings(max_examples=200, deadline=None)
@given(small_graphs_with_sides())
def test_find_kst_matches_brute_force(case):
    G, s, t = case
    witness = find_kst(G, s, t)
    assert (witness is not None) == _has_kst_brute_force(G, s, t)
    if witness is not None:
        assert len(witness.left) == s and len(witness.right) == t
        assert not set(witness.left) & set(witness.right)
        assert all(G.has_edge(u, v) for u in witness.left for v in witness.right)


@settings(max_examples=200, deadline=None)
@given(small_graphs_with_sides())
def test_find_kst_is_monotone_in_both_sides(case):
    G, s, t = case
    if find_kst(G, s, t) is None:
        return
    for s2 in range(2, s + 1):
        for t2 in range(s2, t + 1):
            assert find_kst(G, s2, t2) is not None
