# -*- coding: utf-8 -*-
"""
Embutidor do regime denso: estrelas, unidades (h1,h2,h3) e montagem.

Fluxo:
    1. harvest_disjoint_stars: estrelas hub e satélite vértice-disjuntas
    2. grow_unit: liga folhas do hub a centros de satélites (regras B1-B3)
    3. find_units: coleção maximal de unidades aresta-disjuntas
    4. assemble_from_units: liga exteriores par a par (regras A1-A3) e
       estende pelos ramos até os centros
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Optional, Union

from ..errors import Deficit, DeficitError, LedgerInvariantError
from .expansion import find_avoiding_path, theoretical_path_budget
from .graph_core import AvoidSet, Edge, Graph, as_fraction, avg_degree, canon
from .immersion import Immersion, immersion_from_connections

logger = logging.getLogger(__name__)

__all__ = [
    "Star",
    "Unit",
    "validate_unit",
    "DenseParams",
    "harvest_disjoint_stars",
    "grow_unit",
    "UnitSearch",
    "find_units",
    "DenseReport",
    "assemble_from_units",
]


def _path_edges(path) -> list[Edge]:
    return [canon(a, b) for a, b in zip(path, path[1:])]


@dataclass(frozen=True)
class Star:
    center: int
    leaves: tuple[int, ...]

    def edges(self) -> set[Edge]:
        return {canon(self.center, leaf) for leaf in self.leaves}

    def vertices(self) -> set[int]:
        return {self.center, *self.leaves}


@dataclass
class Unit:
    """Centro v, estrelas S(u_i) e ramos v -> u_i, com contadores por estrela."""

    center: int
    stars: list[Star]
    branches: list[tuple[int, ...]]
    h3: int
    used_pendants: list[int] = field(default_factory=list)
    occupied: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.used_pendants:
            self.used_pendants = [0] * len(self.stars)
        if not self.occupied:
            self.occupied = [False] * len(self.stars)

    def exterior(self) -> set[int]:
        return {leaf for star in self.stars for leaf in star.leaves}

    def pendant_edges(self) -> set[Edge]:
        return set().union(*(star.edges() for star in self.stars)) if self.stars else set()

    def branch_edges(self) -> set[Edge]:
        return {e for branch in self.branches for e in _path_edges(branch)}

    def edges(self) -> set[Edge]:
        return self.pendant_edges() | self.branch_edges()


def validate_unit(
    G: Graph, unit: Unit, h1: Optional[int] = None, h2: Optional[int] = None, h3: Optional[int] = None
) -> list[str]:
    """Problemas encontrados na unidade (lista vazia = todas as invariantes valem)."""
    problems: list[str] = []
    if len(unit.branches) != len(unit.stars):
        problems.append("número de ramos difere do número de estrelas")
    if h1 is not None and len(unit.stars) < h1:
        problems.append(f"{len(unit.stars)} estrelas < h1={h1}")
    seen: set[int] = set()
    for idx, star in enumerate(unit.stars):
        if star.center in star.leaves:
            problems.append(f"estrela {idx}: centro entre as folhas")
        if any(not G.has_edge(star.center, leaf) for leaf in star.leaves):
            problems.append(f"estrela {idx}: folha não adjacente ao centro")
        if h2 is not None and len(star.leaves) != h2:
            problems.append(f"estrela {idx}: {len(star.leaves)} folhas != h2={h2}")
        if star.vertices() & seen or unit.center in star.vertices():
            problems.append(f"estrela {idx}: não é vértice-disjunta")
        seen |= star.vertices()
    leaves = unit.exterior()
    pendants = unit.pendant_edges()
    used: set[Edge] = set()
    bound = unit.h3 if h3 is None else h3
    for idx, (star, branch) in enumerate(zip(unit.stars, unit.branches)):
        if not branch or branch[0] != unit.center or branch[-1] != star.center:
            problems.append(f"ramo {idx}: extremidades erradas")
        if len(branch) - 1 > bound:
            problems.append(f"ramo {idx}: comprimento {len(branch) - 1} > h3={bound}")
        for a, b in zip(branch, branch[1:]):
            if not G.has_edge(a, b):
                problems.append(f"ramo {idx}: {a}-{b} não é aresta")
                continue
            e = canon(a, b)
            if e in used:
                problems.append(f"ramo {idx}: aresta {a}-{b} repetida")
            if e in pendants:
                problems.append(f"ramo {idx}: usa aresta pendente {a}-{b}")
            used.add(e)
        if set(branch[1:-1]) & leaves:
            problems.append(f"ramo {idx}: interior toca folhas")
    return problems


@dataclass
class DenseParams:
    """Parâmetros do regime denso (fórmulas teóricas ou escala prática)."""

    eps1: float
    eps2: float
    eta: float
    d: Fraction
    ell: int
    ell_prime: int
    ell_double_prime: int
    m: int
    h1: int
    h2: int
    h3: int
    path_budget: int
    hub_count: int
    hub_size: int
    sat_count: int
    sat_size: int
    reach_target: int
    unit_target: int
    subfamily_size: int
    practical: bool = True

    @property
    def overuse_threshold(self) -> int:
        return math.ceil(self.h2 / 2)

    @property
    def discard_threshold(self) -> int:
        return max(1, math.ceil(as_fraction(self.eta) * self.d / 4))

    def ordering_ok(self) -> bool:
        return self.ell <= self.ell_double_prime <= self.ell_prime

    @staticmethod
    def _ells(d: Fraction, eta: float) -> tuple[int, int, int]:
        e = as_fraction(eta)
        return (
            math.floor((1 - 5 * e) * d),
            math.floor((1 - 4 * e) * d),
            math.floor((1 - Fraction(9, 2) * e) * d),
        )

    @classmethod
    def theoretical(cls, G: Graph, eps1: float, eps2: float, eta: float) -> "DenseParams":
        d = avg_degree(G)
        ell, ell_p, ell_pp = cls._ells(d, eta)
        m = theoretical_path_budget(G.n, d, eps1, eps2)
        e = as_fraction(eta)
        return cls(
            eps1=eps1, eps2=eps2, eta=eta, d=d,
            ell=ell, ell_prime=ell_p, ell_double_prime=ell_pp, m=m,
            h1=ell_p, h2=m ** 5, h3=2 * m, path_budget=m,
            hub_count=m ** 10, hub_size=math.floor(d - 3 * e * d),
            sat_count=math.floor(d * m ** 15), sat_size=m ** 10,
            reach_target=math.ceil(ell_p + e * d / 2),
            unit_target=ell_p, subfamily_size=ell_pp, practical=False,
        )

    @classmethod
    def practical_scale(cls, G: Graph, eps1: float, eps2: float, eta: float, **overrides) -> "DenseParams":
        """
        Escala de bancada: estrelas pequenas, orçamento de caminho >= diâmetro.

        Dois hubs por rodada, para que `grow_unit` tenha um hub reserva quando
        as folhas do primeiro não alcançam `reach_target` centros.
        """
        d = avg_degree(G) if G.n else Fraction(0)
        ell, ell_p, ell_pp = cls._ells(d, eta)
        h1 = overrides.pop("h1", 2)
        h2 = overrides.pop("h2", 3)
        path_budget = overrides.pop("path_budget", max(1, G.n))
        unit_target = overrides.pop("unit_target", min(G.n, math.floor(d) + 1))
        values = dict(
            eps1=eps1, eps2=eps2, eta=eta, d=d,
            ell=ell, ell_prime=ell_p, ell_double_prime=ell_pp, m=path_budget,
            h1=h1, h2=h2, h3=path_budget + 1, path_budget=path_budget,
            hub_count=2, hub_size=h1 + 1, sat_count=h1 + 1, sat_size=2 * h2,
            reach_target=h1, unit_target=unit_target, subfamily_size=unit_target,
            practical=True,
        )
        unknown = set(overrides) - set(values)
        if unknown:
            raise ValueError(f"sobrescritas desconhecidas para DenseParams: {sorted(unknown)}")
        values.update(overrides)
        return cls(**values)


# ==============================================================================
#      ESTRELAS E UNIDADES
# ==============================================================================

def harvest_disjoint_stars(
    G: Graph,
    hub_spec: tuple[int, int],
    leaf_spec: tuple[int, int],
    exclude: Optional[AvoidSet] = None,
) -> tuple[list[Star], list[Star]]:
    """
    Coleta gulosa de estrelas vértice-disjuntas, maior grau disponível primeiro.

    Raises:
        DeficitError: a coleção maximal não atinge a quantidade pedida.
    """
    exclude = exclude or AvoidSet()
    used = set(exclude.vertices)

    def available(v: int) -> list[int]:
        return [w for w in G.adjacency[v] if w not in used and canon(v, w) not in exclude.edges]

    def take(count: int, size: int, kind: str) -> list[Star]:
        if count < 0 or size < 0:
            raise ValueError(f"especificação inválida para {kind}: ({count}, {size})")
        stars: list[Star] = []
        while len(stars) < count:
            best: Optional[tuple[int, int, list[int]]] = None
            for v in range(G.n):
                if v in used:
                    continue
                free = available(v)
                if len(free) >= size and (best is None or len(free) > best[0]):
                    best = (len(free), v, free)
            if best is None:
                raise DeficitError(Deficit(kind, len(stars), count))
            _, center, free = best
            leaves = tuple(free[:size])
            used.add(center)
            used.update(leaves)
            stars.append(Star(center, leaves))
        return stars

    hubs = take(*hub_spec, "hubs")
    satellites = take(*leaf_spec, "satellites")
    return hubs, satellites


def grow_unit(
    G: Graph,
    hubs: list[Star],
    satellites: list[Star],
    p: DenseParams,
    global_avoid: Optional[AvoidSet] = None,
) -> Union[Unit, Deficit]:
    """
    Liga folhas de cada hub aos centros de satélites por caminhos curtos.

    Evita folhas ocupadas como extremidade, arestas de estrelas, o conjunto
    global B e os vértices Z ∪ V. Fica com o hub que alcança mais centros,
    descarta satélites com metade ou mais das folhas usadas por interiores
    e apara os restantes para h2 folhas.
    """
    global_avoid = global_avoid or AvoidSet()
    if not hubs:
        return Deficit("hubs", 0, 1)
    if not satellites:
        return Deficit("reachedCenters", 0, p.h1)

    star_edges = set().union(*(s.edges() for s in hubs + satellites))
    hub_centers = {h.center for h in hubs}
    blocked_vertices = global_avoid.vertices | hub_centers
    best: Optional[tuple[int, int, dict[int, tuple[int, ...]]]] = None

    for hub_idx, hub in enumerate(hubs):
        occupied: set[int] = set()
        used_edges: set[Edge] = set()
        branches: dict[int, tuple[int, ...]] = {}
        for sat_idx, sat in enumerate(satellites):
            if len(occupied) == len(hub.leaves):
                break
            avoid = AvoidSet(
                vertices=set(blocked_vertices),
                edges=global_avoid.edges | star_edges | used_edges,
                forbidden_endpoints=set(occupied),
            )
            found = find_avoiding_path(G, hub.leaves, {sat.center}, avoid, max_len=p.h3 - 1)
            if found is None:
                continue
            occupied.add(found.path[0])
            used_edges.update(found.edges())
            branches[sat_idx] = (hub.center,) + found.path
            if len(branches) >= p.reach_target:
                break
        if best is None or len(branches) > best[0]:
            best = (len(branches), hub_idx, branches)
        if len(branches) >= p.reach_target:
            break

    reached, hub_idx, branches = best
    if reached < p.reach_target:
        logger.warning(f"Hub {hubs[hub_idx].center} alcançou {reached} centros (alvo {p.reach_target})")

    interiors = {v for branch in branches.values() for v in branch[1:-1]}
    kept: list[tuple[Star, tuple[int, ...]]] = []
    for sat_idx in sorted(branches):
        sat = satellites[sat_idx]
        touched = [leaf for leaf in sat.leaves if leaf in interiors]
        if 2 * len(touched) >= len(sat.leaves):
            logger.debug(f"Satélite {sat.center} descartado: {len(touched)} folhas em interiores")
            continue
        free = [leaf for leaf in sat.leaves if leaf not in interiors]
        if len(free) < p.h2:
            continue
        kept.append((Star(sat.center, tuple(free[: p.h2])), branches[sat_idx]))
        if len(kept) == p.h1:
            break
    if len(kept) < p.h1:
        return Deficit("reachedCenters", reached, p.h1, note=f"estrelas_restantes={len(kept)}")

    return Unit(
        center=hubs[hub_idx].center,
        stars=[star for star, _ in kept],
        branches=[branch for _, branch in kept],
        h3=max(len(branch) - 1 for _, branch in kept),
    )


@dataclass
class UnitSearch:
    units: list[Unit] = field(default_factory=list)
    deficits: list[Deficit] = field(default_factory=list)


def _check_pairwise_disjoint(units: list[Unit]) -> None:
    centers: set[int] = set()
    edges: set[Edge] = set()
    for idx, unit in enumerate(units):
        if unit.center in centers:
            raise LedgerInvariantError(f"unidade {idx}: centro {unit.center} repetido")
        own = unit.edges()
        if own & edges:
            raise LedgerInvariantError(f"unidade {idx}: compartilha arestas com unidades anteriores")
        centers.add(unit.center)
        edges |= own


def find_units(G: Graph, p: DenseParams) -> UnitSearch:
    """
    Laço da coleção maximal: mantém centros Z e arestas usadas B, colhe
    estrelas em (G - Z) \\ B e cresce uma unidade por rodada até o alvo ou
    até um déficit. Nunca aborta; déficits ficam no registro.
    """
    search = UnitSearch()
    centers: set[int] = set()
    used: set[Edge] = set()
    for rnd in range(p.unit_target):
        avoid = AvoidSet(vertices=set(centers), edges=set(used))
        try:
            hubs, satellites = harvest_disjoint_stars(
                G, (p.hub_count, p.hub_size), (p.sat_count, p.sat_size), avoid
            )
        except DeficitError as exc:
            logger.info(f"Rodada {rnd}: {exc.deficit.to_line()}")
            search.deficits.append(exc.deficit)
            break
        outcome = grow_unit(G, hubs, satellites, p, avoid)
        if isinstance(outcome, Deficit):
            logger.info(f"Rodada {rnd}: {outcome.to_line()}")
            search.deficits.append(outcome)
            break
        search.units.append(outcome)
        centers.add(outcome.center)
        used |= outcome.edges()
    _check_pairwise_disjoint(search.units)
    logger.info(f"Unidades encontradas: {len(search.units)} de {p.unit_target}")
    return search


# ==============================================================================
#      MONTAGEM
# ==============================================================================

@dataclass
class DenseReport:
    pairs_attempted: int = 0
    connected: list[tuple[int, int, int]] = field(default_factory=list)
    failures: list[tuple[int, int]] = field(default_factory=list)
    discards: list[tuple[int, int]] = field(default_factory=list)
    deficits: list[Deficit] = field(default_factory=list)
    route_edges: int = 0
    branch_edges: int = 0
    route_budget: float = 0.0
    branch_budget: float = 0.0

    @property
    def route_budget_ok(self) -> bool:
        return self.route_edges <= self.route_budget

    @property
    def branch_budget_ok(self) -> bool:
        return self.branch_edges <= self.branch_budget

    def to_lines(self) -> list[str]:
        lines = [d.to_line() for d in self.deficits]
        lines += [f"pair {i} {j} len={length}" for i, j, length in self.connected]
        lines += [f"pair_failed {i} {j}" for i, j in self.failures]
        lines += [f"discard unit={u} overused={c}" for u, c in self.discards]
        lines.append(f"route_edges={self.route_edges} bound={self.route_budget:.1f} ok={self.route_budget_ok}")
        lines.append(f"branch_edges={self.branch_edges} bound={self.branch_budget:.1f} ok={self.branch_budget_ok}")
        return lines


def assemble_from_units(G: Graph, units: list[Unit], p: DenseParams) -> tuple[Immersion, DenseReport]:
    """
    Liga pares de centros por caminhos exterior-exterior e estende pelos ramos.

    Cada conexão evita folhas de estrelas ocupadas como extremidade, arestas
    já usadas, todos os centros e todas as arestas de ramos. Estrelas com
    ceil(h2/2) arestas pendentes consumidas viram sobreusadas; unidades com
    ceil(eta*d/4) estrelas sobreusadas são descartadas.
    """
    report = DenseReport()
    host = G.fingerprint()
    family = [replace(u, used_pendants=[0] * len(u.stars), occupied=[False] * len(u.stars))
              for u in units[: p.subfamily_size]]
    t = len(family)
    centers = [u.center for u in family]
    center_set = {u.center for u in units}
    branch_edges = set().union(*(u.branch_edges() for u in units)) if units else set()
    pendant_owner: dict[Edge, tuple[int, int]] = {}
    for ui, unit in enumerate(family):
        for si, star in enumerate(unit.stars):
            for e in star.edges():
                pendant_owner[e] = (ui, si)
    overused = [[False] * len(u.stars) for u in family]
    discarded = [False] * t
    used: set[Edge] = set()
    paths: dict[tuple[int, int], tuple[int, ...]] = {}

    def endpoints(ui: int) -> dict[int, int]:
        unit = family[ui]
        ends: dict[int, int] = {}
        for si, star in enumerate(unit.stars):
            if unit.occupied[si]:
                continue
            for leaf in star.leaves:
                if leaf not in center_set and canon(star.center, leaf) not in used:
                    ends.setdefault(leaf, si)
        return ends

    def occupied_leaves(ui: int) -> set[int]:
        unit = family[ui]
        return {leaf for si, star in enumerate(unit.stars) if unit.occupied[si] for leaf in star.leaves}

    for i, j in combinations(range(t), 2):
        if discarded[i] or discarded[j]:
            continue
        report.pairs_attempted += 1
        ends_i, ends_j = endpoints(i), endpoints(j)
        if not ends_i or not ends_j:
            report.failures.append((i, j))
            continue
        avoid = AvoidSet(
            vertices=set(center_set),
            edges=used | branch_edges | family[i].pendant_edges() | family[j].pendant_edges(),
            forbidden_endpoints=occupied_leaves(i) | occupied_leaves(j),
        )
        found = find_avoiding_path(G, ends_i, ends_j, avoid, max_len=p.path_budget)
        if found is None:
            logger.debug(f"Par ({i},{j}) sem caminho exterior")
            report.failures.append((i, j))
            continue
        a, b = found.path[0], found.path[-1]
        si, sj = ends_i[a], ends_j[b]
        full = family[i].branches[si] + found.path + tuple(reversed(family[j].branches[sj]))
        full_edges = _path_edges(full)
        if len(set(full_edges)) != len(full_edges) or used & set(full_edges):
            raise LedgerInvariantError(f"par ({i},{j}) reutiliza arestas do registro")
        used.update(full_edges)
        family[i].occupied[si] = True
        family[j].occupied[sj] = True
        paths[(i, j)] = full
        report.connected.append((i, j, len(full) - 1))
        report.route_edges += found.length + 2
        report.branch_edges += len(family[i].branches[si]) + len(family[j].branches[sj]) - 2

        for e in found.edges():
            owner = pendant_owner.get(e)
            if owner is None:
                continue
            ui, star_idx = owner
            family[ui].used_pendants[star_idx] += 1
            if family[ui].used_pendants[star_idx] >= p.overuse_threshold:
                overused[ui][star_idx] = True
        for ui in range(t):
            count = sum(overused[ui])
            if not discarded[ui] and count >= p.discard_threshold:
                discarded[ui] = True
                report.discards.append((ui, count))
                logger.info(f"Unidade {ui} (centro {centers[ui]}) descartada: {count} estrelas sobreusadas")

    d2m = float(p.d) ** 2 * p.m
    report.route_budget = 3 * d2m
    report.branch_budget = 2 * d2m
    surviving = [k for k in range(t) if not discarded[k]]
    index = {k: pos for pos, k in enumerate(surviving)}
    kept_paths = {
        (index[i], index[j]): path for (i, j), path in paths.items() if i in index and j in index
    }
    imm = immersion_from_connections([centers[k] for k in surviving], kept_paths, host)
    logger.info(
        f"Montagem densa: {len(report.connected)}/{report.pairs_attempted} pares, "
        f"{len(report.discards)} descartes, ordem {imm.order}"
    )
    return imm, report
