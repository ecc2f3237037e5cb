# -*- coding: utf-8 -*-
import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from pipelines.clique_immersion.src.errors import Deficit, DeficitError
from pipelines.clique_immersion.src.modules.dense_embedder import (
    DenseParams,
    Star,
    Unit,
    assemble_from_units,
    find_units,
    grow_unit,
    harvest_disjoint_stars,
    validate_unit,
)
from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, generate
from pipelines.clique_immersion.src.modules.graph_core import Graph
from pipelines.clique_immersion.src.modules.immersion import verify_immersion
from tests.conftest import complete, disjoint_cliques

EPS = dict(eps1=1 / 400, eps2=0.01, eta=0.1)


def _scaled(G: Graph, h1: int, h2: int, h3: int, **extra) -> DenseParams:
    """Escala prática com (h1, h2, h3) fixos; h3 = path_budget + 1."""
    return DenseParams.practical_scale(G, **EPS, h1=h1, h2=h2, path_budget=h3 - 1, **extra)


# ==============================================================================
#      PARÂMETROS
# ==============================================================================

def test_theoretical_thresholds_on_k20():
    p = DenseParams.theoretical(complete(20), **EPS)
    assert p.d == 19
    assert (p.ell, p.ell_double_prime, p.ell_prime) == (9, 10, 11)
    assert p.ordering_ok()
    assert p.h1 == p.ell_prime and p.h3 == 2 * p.m
    assert not p.practical


def test_practical_scale_defaults_and_overrides():
    G = complete(10)
    p = DenseParams.practical_scale(G, **EPS)
    assert (p.h1, p.h2, p.path_budget, p.h3) == (2, 3, 10, 11)
    assert p.unit_target == 10 and p.overuse_threshold == 2
    assert p.discard_threshold == 1
    assert p.hub_count == 2 and p.hub_size == 3
    assert _scaled(G, 3, 2, 3).h3 == 3
    with pytest.raises(ValueError):
        DenseParams.practical_scale(G, **EPS, bogus=1)


# ==============================================================================
#      ESTRELAS
# ==============================================================================

def test_harvest_whole_clique_as_single_star():
    hubs, satellites = harvest_disjoint_stars(complete(9), (1, 8), (0, 1))
    assert hubs == [Star(0, (1, 2, 3, 4, 5, 6, 7, 8))]
    assert satellites == []


def test_harvest_reports_hub_deficit():
    with pytest.raises(DeficitError) as info:
        harvest_disjoint_stars(complete(9), (2, 8), (0, 1))
    assert info.value.deficit == Deficit("hubs", 1, 2)


def test_harvest_on_random_regular_graph_gives_disjoint_stars():
    G = generate(GenSpec(GenKind.RANDOM_REGULAR, {"n": 100, "d": 3}, seed=0))
    hubs, satellites = harvest_disjoint_stars(G, (5, 3), (10, 2))
    assert len(hubs) == 5 and len(satellites) == 10
    seen: set[int] = set()
    for star in hubs + satellites:
        assert not star.vertices() & seen
        assert all(G.has_edge(star.center, leaf) for leaf in star.leaves)
        seen |= star.vertices()


def test_harvest_rejects_negative_spec():
    with pytest.raises(ValueError):
        harvest_disjoint_stars(complete(4), (-1, 2), (0, 0))


# ==============================================================================
#      UNIDADES
# ==============================================================================

def test_grow_unit_on_k30():
    G = complete(30)
    p = _scaled(G, 3, 2, 2)
    hubs, satellites = harvest_disjoint_stars(G, (p.hub_count, p.hub_size), (p.sat_count, p.sat_size))
    unit = grow_unit(G, hubs, satellites, p)
    assert isinstance(unit, Unit)
    assert unit.center == 0
    assert len(unit.stars) == 3
    assert validate_unit(G, unit, 3, 2, 2) == []


def test_grow_unit_without_hubs():
    G = complete(5)
    assert isinstance(grow_unit(G, [], [Star(1, (2, 3))], _scaled(G, 1, 2, 2)), Deficit)


def test_grow_unit_falls_back_to_second_hub():
    G = Graph.from_edges(9, [(0, 1), (0, 2), (3, 4), (3, 5), (4, 6), (6, 7), (6, 8)])
    p = _scaled(G, 1, 2, 4)
    unit = grow_unit(G, [Star(0, (1, 2)), Star(3, (4, 5))], [Star(6, (7, 8))], p)
    assert isinstance(unit, Unit)
    assert unit.center == 3
    assert unit.branches == [(3, 4, 6)]
    assert validate_unit(G, unit, 1, 2, 4) == []


def test_grow_unit_between_unconnected_stars():
    G = Graph.from_edges(8, [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7)])
    p = _scaled(G, 1, 2, 4)
    outcome = grow_unit(G, [Star(0, (1, 2, 3))], [Star(4, (5, 6))], p)
    assert outcome == Deficit("reachedCenters", 0, 1, note="estrelas_restantes=0")


def test_validate_unit_flags_broken_invariants():
    G = complete(6)
    unit = Unit(center=0, stars=[Star(2, (3, 4))], branches=[(0, 1, 2)], h3=2)
    assert validate_unit(G, unit, 1, 2, 2) == []
    assert validate_unit(G, unit, 2, 2, 2)
    assert validate_unit(G, unit, 1, 3, 2)
    assert validate_unit(G, unit, 1, 2, 1)
    through_leaf = Unit(center=0, stars=[Star(2, (3, 4))], branches=[(0, 3, 2)], h3=2)
    assert any("pendente" in p for p in validate_unit(G, through_leaf))


def test_find_units_on_k40():
    G = complete(40)
    p = _scaled(G, 3, 2, 3, unit_target=4)
    search = find_units(G, p)
    assert len(search.units) == 4
    assert search.deficits == []
    centers = [u.center for u in search.units]
    assert len(set(centers)) == 4
    for a in range(4):
        assert validate_unit(G, search.units[a], 3, 2, 3) == []
        for b in range(a + 1, 4):
            assert not search.units[a].edges() & search.units[b].edges()

    imm, report = assemble_from_units(G, search.units, p)
    assert verify_immersion(G, imm).ok
    assert 1 <= imm.order <= 4 - len(report.discards)
    if not report.failures:
        assert imm.order == 4 - len(report.discards)
    assert set(imm.branch) <= set(centers)
    assert report.route_budget == 3 * 39 ** 2 * p.m


def test_find_units_edgeless_and_zero_target():
    G = Graph.empty(10)
    search = find_units(G, _scaled(G, 2, 3, 3))
    assert search.units == []
    assert search.deficits and search.deficits[0].kind == "hubs"
    K = complete(12)
    assert find_units(K, _scaled(K, 2, 3, 3, unit_target=0)).units == []


# ==============================================================================
#      MONTAGEM
# ==============================================================================

def _k5_unit(offset: int) -> Unit:
    return Unit(
        center=offset,
        stars=[Star(offset + 2, (offset + 3, offset + 4))],
        branches=[(offset, offset + 1, offset + 2)],
        h3=2,
    )


def test_assemble_single_unit():
    G = complete(5)
    imm, report = assemble_from_units(G, [_k5_unit(0)], _scaled(G, 1, 2, 2))
    assert imm.order == 1 and imm.branch == (0,)
    assert report.pairs_attempted == 0


def test_assemble_components_without_connection():
    G = disjoint_cliques(5, 2)
    units = [_k5_unit(0), _k5_unit(5)]
    for unit in units:
        assert validate_unit(G, unit, 1, 2, 2) == []
    imm, report = assemble_from_units(G, units, _scaled(G, 1, 2, 2))
    assert report.failures == [(0, 1)]
    assert imm.order == 1
    assert verify_immersion(G, imm).ok


def test_assemble_two_units_in_one_clique():
    G = complete(10)
    units = [_k5_unit(0), _k5_unit(5)]
    imm, report = assemble_from_units(G, units, _scaled(G, 1, 2, 2))
    assert imm.order == 2
    assert verify_immersion(G, imm).ok
    path = imm.paths[(0, 1)]
    assert path[:3] == (0, 1, 2) and path[-3:] == (7, 6, 5)
    assert report.connected[0][:2] == (0, 1)
    assert report.route_edges == 3 and report.branch_edges == 4
    assert report.route_budget_ok and report.branch_budget_ok


# ==============================================================================
#      GRAFOS DENSOS ALEATÓRIOS
# ==============================================================================

@st.composite
def dense_hosts(draw) -> Graph:
    n = draw(st.integers(min_value=10, max_value=32))
    density = draw(st.sampled_from([0.5, 0.7, 0.9]))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    return generate(GenSpec(GenKind.GNP, {"n": n, "p": density}, seed=seed))


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(dense_hosts())
def test_dense_route_always_verifies(G):
    p = DenseParams.practical_scale(G, **EPS, unit_target=min(G.n, 5))
    search = find_units(G, p)
    for a, unit in enumerate(search.units):
        assert validate_unit(G, unit, p.h1, p.h2, p.h3) == []
        for other in search.units[a + 1:]:
            assert not unit.edges() & other.edges()
    imm, _ = assemble_from_units(G, search.units, p)
    assert verify_immersion(G, imm).ok
    assert set(imm.branch) <= {u.center for u in search.units} or imm.order <= 1
