# -*- coding: utf-8 -*-
"""
Embutidor do regime esparso.

Rotas:
    - high_degree: muitos vértices de grau alto (Z1), ligados pelas vizinhanças
    - bounded_degree: grau máximo limitado, ramos afastados com bolas internas fixas
    - subexpander: família de subexpansores separados, núcleos e montagem final

Todas as rotas usam um PathLedger com disjunção global de arestas e a
propriedade de caminhos mais curtos consecutivos dentro das bolas internas.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional

from ... import config_immersion as cfg
from ..errors import Deficit, LedgerInvariantError, ParameterError
from .expansion import (
    PathResult,
    extract_robust_expander,
    find_avoiding_path,
    growth_bound_failures,
    measure_ball_growth,
    theoretical_path_budget,
)
from .graph_core import (
    AvoidSet,
    Edge,
    Graph,
    IdMap,
    as_fraction,
    avg_degree,
    ball,
    bfs_layers,
    canon,
    restrict,
    set_distance,
)
from .immersion import Immersion, immersion_from_connections, verify_immersion

logger = logging.getLogger(__name__)

__all__ = [
    "SparseParams",
    "ConsecutiveEntry",
    "PathLedger",
    "Kernel",
    "RouteResult",
    "SubexpanderFamily",
    "SparseOutcome",
    "ROUTE_PRIORITY",
    "embed_high_degree",
    "select_far_apart_branch_vertices",
    "PairRoute",
    "extend_ledger_consecutive",
    "routing_balls",
    "route_pair",
    "replay_consecutive",
    "embed_bounded_degree",
    "find_subexpanders",
    "grow_kernel",
    "assemble_sparse",
    "embed_sparse",
]

ROUTE_PRIORITY = ("high_degree", "high_degree_relaxed", "bounded_degree", "subexpander")


def _path_edges(path: Iterable[int]) -> list[Edge]:
    path = tuple(path)
    return [canon(a, b) for a, b in zip(path, path[1:])]


def _induced_edges(G: Graph, zone: set[int]) -> frozenset:
    return frozenset(canon(u, w) for u in zone for w in G.adjacency[u] if w in zone)


# ==============================================================================
#      PARÂMETROS
# ==============================================================================

@dataclass
class SparseParams:
    eps1: float
    eps2: float
    eta: float
    s: int
    t: int
    d: Fraction
    n: int
    m: int
    kappa: int
    r: int
    ball_exp: int
    z1_threshold: float
    target_order: int
    degree_gate: float
    separation: int
    pair_budget: int
    extraction_rounds: int = cfg.RODADAS_EXTRACAO
    exhaustive_limit: int = cfg.LIMITE_EXAUSTIVO
    trials: int = cfg.AMOSTRAS_CERTIFICACAO
    seed: int = cfg.SEMENTE_PADRAO
    try_all_routes: bool = cfg.TENTAR_TODAS_ROTAS
    deadline: Optional[float] = None
    practical: bool = True

    def __post_init__(self):
        for name in ("kappa", "r", "ball_exp"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} deve ser >= 1 (recebido {getattr(self, name)})")
        if self.separation < 0 or self.target_order < 0:
            raise ParameterError("separation e target_order não podem ser negativos")

    @property
    def assembly_budget(self) -> int:
        return self.m + 2 * self.kappa + 2 * self.r + 2 * self.ball_exp

    @property
    def min_branch_degree(self) -> Fraction:
        return self.d - 2 * as_fraction(self.eta) * self.d

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def header(self) -> list[str]:
        return [
            f"kappa={self.kappa}",
            f"r={self.r}",
            f"ball_exp={self.ball_exp}",
            f"z1_threshold={self.z1_threshold:.3f}",
            f"degree_gate={self.degree_gate:.3f}",
            f"separation={self.separation}",
            f"sparse_target={self.target_order}",
        ]

    @classmethod
    def theoretical(cls, G: Graph, eps1: float, eps2: float, eta: float, s: int, t: int, **extra) -> "SparseParams":
        n = G.n
        d = avg_degree(G)
        log_n = math.log(max(n, 2))
        loglog = math.log(log_n) if n >= 16 else 1.0
        kappa = max(1, math.ceil(log_n / (800 * s * loglog)))
        r = max(1, math.ceil(max(loglog, 0.0) ** 5))
        ball_exp = max(1, math.ceil(math.log(float(d)) ** 4)) if d > 1 else 1
        m = theoretical_path_budget(n, d, eps1, eps2)
        return cls(
            eps1=eps1, eps2=eps2, eta=eta, s=s, t=t, d=d, n=n, m=m,
            kappa=kappa, r=r, ball_exp=ball_exp,
            z1_threshold=float(d) * m ** 3,
            target_order=max(1, math.floor(d)),
            degree_gate=float(d) * log_n ** 120,
            separation=3 * kappa + 1,
            pair_budget=max(1, math.ceil(2 * log_n ** 4)),
            practical=False,
            **extra,
        )

    @classmethod
    def practical_scale(
        cls, G: Graph, eps1: float, eps2: float, eta: float, s: int, t: int, **overrides
    ) -> "SparseParams":
        """
        Inteiros pequenos escalados por ceil(log n); orçamentos >= n cobrem o diâmetro.

        κ = max(1, ceil(log n) // 4); r e o expoente do núcleo seguem κ salvo
        sobrescrita, de modo que B^{κ+r} cresce junto com log n.
        """
        n = G.n
        d = avg_degree(G) if n else Fraction(0)
        kappa = overrides.pop("kappa", max(1, math.ceil(math.log(max(n, 2))) // 4))
        values = dict(
            eps1=eps1, eps2=eps2, eta=eta, s=s, t=t, d=d, n=n,
            m=max(1, n), kappa=kappa,
            r=kappa, ball_exp=kappa,
            z1_threshold=float(math.ceil(4 * d)),
            target_order=min(n, max(2, math.floor(d) + 1)),
            degree_gate=float(math.floor(d) + 1),
            separation=3 * kappa + 1,
            pair_budget=max(1, n),
            practical=True,
        )
        tunables = {"extraction_rounds", "exhaustive_limit", "trials", "seed", "try_all_routes", "deadline"}
        unknown = set(overrides) - set(values) - tunables
        if unknown:
            raise ValueError(f"sobrescritas desconhecidas para SparseParams: {sorted(unknown)}")
        values.update(overrides)
        return cls(**values)


# ==============================================================================
#      REGISTRO DE CAMINHOS
# ==============================================================================

@dataclass(frozen=True)
class ConsecutiveEntry:
    """Prefixo de um caminho dentro da zona do ramo, a máscara usada no roteamento e a zona auditada."""

    prefix: tuple[int, ...]
    zone_edges: frozenset
    avoid_edges: frozenset = frozenset()
    zone: frozenset = frozenset()


@dataclass
class PathLedger:
    """Pares conectados I, caminhos, W, U e listas por ramo."""

    pairs: list[tuple[int, int]] = field(default_factory=list)
    paths: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    used_edges: set[Edge] = field(default_factory=set)
    used_vertices: set[int] = field(default_factory=set)
    per_branch: dict[int, list[ConsecutiveEntry]] = field(default_factory=dict)
    snapshots: dict[tuple[int, int], frozenset] = field(default_factory=dict)

    def charged(self, branch: int) -> set[Edge]:
        out: set[Edge] = set()
        for entry in self.per_branch.get(branch, ()):
            out |= entry.zone_edges
        return out

    def charge(self, branch: int, entry: ConsecutiveEntry) -> None:
        self.per_branch.setdefault(branch, []).append(entry)

    def commit(self, pair: tuple[int, int], path: tuple[int, ...], snapshot: frozenset = frozenset()) -> None:
        edges = _path_edges(path)
        if len(set(edges)) != len(edges):
            raise LedgerInvariantError(f"par {pair}: caminho repete aresta")
        reused = self.used_edges.intersection(edges)
        if reused:
            raise LedgerInvariantError(f"par {pair}: arestas já usadas {sorted(reused)[:3]}")
        if pair in self.paths:
            raise LedgerInvariantError(f"par {pair} já conectado")
        self.pairs.append(pair)
        self.paths[pair] = tuple(path)
        self.used_edges.update(edges)
        self.used_vertices.update(path)
        if snapshot:
            self.snapshots[pair] = snapshot


def _zone_prefix(path: tuple[int, ...], zone: set[int]) -> tuple[int, ...]:
    end = 1
    while end < len(path) and path[end] in zone:
        end += 1
    return path[:end]


def extend_ledger_consecutive(
    G: Graph,
    ledger: PathLedger,
    branch: int,
    zone: Iterable[int],
    target: Iterable[int],
    avoid_edges: Optional[set[Edge]] = None,
) -> Optional[PathResult]:
    """
    Caminho mais curto de `branch` até `target` em G[zone] menos as arestas
    já cobradas deste ramo. Não altera o registro.

    Raises:
        ValueError: `branch` fora da zona.
    """
    zone_set = set(zone)
    if branch not in zone_set:
        raise ValueError(f"ramo {branch} fora da zona")
    targets = set(target) & zone_set
    if not targets:
        return None
    banned = ledger.charged(branch) | (avoid_edges or set())
    dist, parent = bfs_layers(G, [branch], AvoidSet(edges=banned), allowed=zone_set)
    reached = [v for v in targets if v in dist]
    if not reached:
        return None
    end = min(reached, key=lambda v: (dist[v], v))
    walk = [end]
    while parent[walk[-1]] is not None:
        walk.append(parent[walk[-1]])
    return PathResult(tuple(reversed(walk)))


def _charge_and_audit(
    G: Graph,
    ledger: PathLedger,
    branch: int,
    zone: set[int],
    zone_edges: frozenset,
    path: tuple[int, ...],
    avoid_edges: frozenset,
    charged_path: Optional[tuple[int, ...]] = None,
) -> None:
    """
    Confere que o prefixo do caminho na zona é mais curto no resíduo e o cobra ao ramo.

    `charged_path` (padrão: `path`) é o caminho completo cujas arestas na zona são cobradas.
    """
    prefix = _zone_prefix(path, zone)
    check = extend_ledger_consecutive(G, ledger, branch, zone, {prefix[-1]}, set(avoid_edges))
    if check is None or check.length != len(prefix) - 1:
        found = None if check is None else check.length
        raise LedgerInvariantError(
            f"ramo {branch}: prefixo de comprimento {len(prefix) - 1} não é mais curto (resíduo dá {found})"
        )
    charged = frozenset(_path_edges(charged_path or path)) & zone_edges
    ledger.charge(branch, ConsecutiveEntry(prefix, charged, avoid_edges, frozenset(zone)))


def replay_consecutive(G: Graph, ledger: PathLedger, branch: int, zone: Iterable[int]) -> list[str]:
    """
    Reexecuta a lista do ramo em ordem num registro limpo; devolve divergências de comprimento.

    Entradas que guardam a própria zona auditada são refeitas nela; as demais usam `zone`.
    """
    zone_set = set(zone)
    scratch = PathLedger()
    problems: list[str] = []
    for idx, entry in enumerate(ledger.per_branch.get(branch, ())):
        where = set(entry.zone) if entry.zone else zone_set
        found = extend_ledger_consecutive(G, scratch, branch, where, {entry.prefix[-1]}, set(entry.avoid_edges))
        if found is None or found.length != len(entry.prefix) - 1:
            problems.append(f"ramo {branch} entrada {idx}: esperado {len(entry.prefix) - 1}, obtido {found}")
        scratch.charge(branch, entry)
    return problems


# ==============================================================================
#      ROTEAMENTO ENTRE BOLAS
# ==============================================================================

@dataclass
class PairRoute:
    """Caminho de um par e como foi obtido (`spliced` pelas bolas externas ou `direct`)."""

    path: tuple[int, ...]
    mode: str
    connector: Optional[tuple[int, ...]] = None

    @property
    def length(self) -> int:
        return len(self.path) - 1


def routing_balls(
    G: Graph,
    core: Iterable[int],
    radius: int,
    spread: int,
    blocked: set[int],
    used: set[int],
    banned: frozenset,
) -> tuple[set[int], set[int]]:
    """
    Bola interna B^radius(core) e externa B^{spread+radius}(core) em G - banned, fora de `blocked`.

    A externa cresce a partir da interna e também evita `used`.
    """
    sources = set(core) - blocked
    if not sources:
        return set(), set()
    inner, _ = ball(G, sources, radius, AvoidSet(vertices=set(blocked), edges=set(banned)))
    outer, _ = ball(G, inner, spread, AvoidSet(vertices=(blocked | used) - inner, edges=set(banned)))
    return inner, outer


def _splice(
    G: Graph,
    ledger: PathLedger,
    ends: tuple[int, int],
    outers: tuple[set[int], set[int]],
    blocked: set[int],
    banned: frozenset,
    max_len: int,
):
    """Conector entre as bolas externas, estendido até os ramos por `extend_ledger_consecutive`."""
    vi, vj = ends
    x1, x2 = outers[0] - blocked, outers[1] - blocked
    if vi not in x1 or vj not in x2:
        return None
    found = find_avoiding_path(G, x1, x2, AvoidSet(vertices=set(blocked), edges=set(banned)), max_len=max_len)
    if found is None:
        return None
    q = found.path
    a, b = q[0], q[-1]
    # pontas disjuntas do conector, exceto nas junções a e b
    head_zone = (x1 - set(q)) | {a}
    head_avoid = banned | frozenset(_path_edges(q))
    if vi not in head_zone:
        return None
    head = extend_ledger_consecutive(G, ledger, vi, head_zone, {a}, set(head_avoid))
    if head is None or vj in head.path:
        return None
    tail_zone = (x2 - set(q) - set(head.path)) | {b}
    tail_avoid = head_avoid | frozenset(_path_edges(head.path))
    if vj not in tail_zone:
        return None
    tail = extend_ledger_consecutive(G, ledger, vj, tail_zone, {b}, set(tail_avoid))
    if tail is None:
        return None
    path = head.path + q[1:] + tuple(reversed(tail.path))[1:]
    return path, q, (head.path, head_zone, head_avoid), (tail.path, tail_zone, tail_avoid)


def route_pair(
    G: Graph,
    ledger: PathLedger,
    ends: tuple[int, int],
    zones: tuple[set[int], set[int]],
    zone_edges: tuple[frozenset, frozenset],
    outers: tuple[set[int], set[int]],
    blocked: set[int],
    banned: frozenset,
    connector_len: int,
    budget: int,
) -> Optional[PairRoute]:
    """
    Liga v_i a v_j e cobra os prefixos nas zonas dos dois ramos.

    Primeiro tenta o conector (X1, X2) mais curto entre as bolas externas,
    evitando `blocked` e `banned`, com as duas pontas feitas por
    `extend_ledger_consecutive` dentro das bolas externas. Sem emenda dentro
    de `budget`, cai para o caminho v_i -> v_j mais curto no mesmo resíduo.
    O registro só é cobrado quando um caminho é devolvido; o commit fica com o chamador.
    """
    vi, vj = ends
    spliced = _splice(G, ledger, ends, outers, blocked, banned, connector_len)
    if spliced is not None and len(spliced[0]) - 1 <= budget:
        path, q, (head, head_zone, head_avoid), (tail, tail_zone, tail_avoid) = spliced
        _charge_and_audit(G, ledger, vi, (zones[0] - blocked) & head_zone, zone_edges[0], head, head_avoid, path)
        _charge_and_audit(G, ledger, vj, (zones[1] - blocked) & tail_zone, zone_edges[1], tail, tail_avoid, path)
        return PairRoute(path, "spliced", q)

    found = find_avoiding_path(G, {vi}, {vj}, AvoidSet(vertices=set(blocked), edges=set(banned)), max_len=budget)
    if found is None:
        return None
    path = found.path
    _charge_and_audit(G, ledger, vi, zones[0] - blocked, zone_edges[0], path, banned)
    _charge_and_audit(G, ledger, vj, zones[1] - blocked, zone_edges[1], tuple(reversed(path)), banned)
    return PairRoute(path, "direct")


def _maximal_pairs(t: int, connect: Callable[[int, int], bool], should_stop: Callable[[], bool]) -> list[tuple[int, int]]:
    """Pares em ordem lexicográfica, mais uma rodada de nova tentativa. Retorna os que falharam."""
    failed = []
    for i, j in combinations(range(t), 2):
        if should_stop() or not connect(i, j):
            failed.append((i, j))
    still = []
    for i, j in failed:
        if should_stop() or not connect(i, j):
            still.append((i, j))
    return still


# ==============================================================================
#      RESULTADOS
# ==============================================================================

@dataclass
class RouteResult:
    route: str
    immersion: Immersion
    ledger: PathLedger = field(default_factory=PathLedger)
    failures: list[tuple[int, int]] = field(default_factory=list)
    deficits: list[Deficit] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.immersion.order


# ==============================================================================
#      ROTA DE GRAU ALTO
# ==============================================================================

def embed_high_degree(G: Graph, Z1: Iterable[int], p: SparseParams, route: str = "high_degree") -> RouteResult:
    """
    Usa até `target_order` vértices de Z1 (maior grau primeiro) como ramos.

    Pares adjacentes usam a aresta direta; os demais ligam N_i a N_j por um
    caminho de até m arestas que evita arestas usadas e todos os ramos.
    """
    host = G.fingerprint()
    pool = sorted(set(Z1), key=lambda v: (-G.degree(v), v))
    if len(pool) < p.target_order:
        logger.warning(f"|Z1|={len(pool)} abaixo do alvo {p.target_order}")
    branch = tuple(sorted(pool[: p.target_order]))
    selected = set(branch)
    ledger = PathLedger()
    deficits = [] if len(branch) >= p.target_order else [Deficit("z1", len(branch), p.target_order)]

    for i, j in combinations(range(len(branch)), 2):
        if G.has_edge(branch[i], branch[j]):
            ledger.commit((i, j), (branch[i], branch[j]))

    def connect(i: int, j: int) -> bool:
        if (i, j) in ledger.paths:
            return True
        vi, vj = branch[i], branch[j]
        ni = {w for w in G.adjacency[vi] if w not in selected and canon(vi, w) not in ledger.used_edges}
        nj = {w for w in G.adjacency[vj] if w not in selected and canon(vj, w) not in ledger.used_edges}
        if not ni or not nj:
            return False
        found = find_avoiding_path(G, ni, nj, AvoidSet(vertices=set(selected), edges=set(ledger.used_edges)), max_len=p.m)
        if found is None:
            logger.debug(f"Grau alto: par ({vi},{vj}) sem conector")
            return False
        ledger.commit((i, j), (vi,) + found.path + (vj,))
        return True

    failures = _maximal_pairs(len(branch), connect, p.expired)
    imm = immersion_from_connections(branch, ledger.paths, host)
    lines = [f"route={route} z1={len(pool)} connected={len(ledger.pairs)} failed={len(failures)} order={imm.order}"]
    logger.info(f"Rota {route}: ordem {imm.order} ({len(failures)} pares sem conexão)")
    return RouteResult(route, imm, ledger, failures, deficits, lines)


# ==============================================================================
#      ROTA DE GRAU LIMITADO
# ==============================================================================

def select_far_apart_branch_vertices(G: Graph, min_degree, separation: int, count: int) -> list[int]:
    """Conjunto guloso (id crescente) de vértices com grau >= min_degree e distância mútua >= separation."""
    if separation < 0:
        raise ValueError(f"separação negativa: {separation}")
    chosen: list[int] = []
    if count <= 0:
        return chosen
    for v in range(G.n):
        if G.degree(v) < min_degree:
            continue
        if separation > 1 and chosen:
            near, _ = ball(G, {v}, separation - 1)
            if near.intersection(chosen):
                continue
        chosen.append(v)
        if len(chosen) == count:
            break
    if len(chosen) < count:
        logger.warning(Deficit("farApartBranches", len(chosen), count).to_line())
    return chosen


def embed_bounded_degree(G: Graph, p: SparseParams) -> RouteResult:
    """
    Ramos afastados (separação 3κ+1) com bolas internas B^r fixas.

    W_ij reúne as arestas usadas e as arestas das bolas internas dos outros
    ramos. Cada par é ligado por um conector de até m arestas em G - W_ij
    entre as bolas externas B^{κ+r}_{G-W_ij}, estendido até v_i e v_j dentro
    delas; o prefixo na bola interna de cada extremidade é auditado como
    caminho mais curto consecutivo. O crescimento da bola externa é medido
    com Y = U - {v_i}.
    """
    host = G.fingerprint()
    if G.n == 0:
        return RouteResult("bounded_degree", Immersion.empty(host))
    branch = tuple(select_far_apart_branch_vertices(G, p.min_branch_degree, p.separation, p.target_order))
    t = len(branch)
    zones = [ball(G, {v}, p.r)[0] for v in branch]
    zone_edges = [_induced_edges(G, z) for z in zones]
    ledger = PathLedger()
    deficits = [] if t >= p.target_order else [Deficit("farApartBranches", t, p.target_order)]
    lines: list[str] = []

    def connect(i: int, j: int) -> bool:
        if (i, j) in ledger.paths:
            return True
        vi, vj = branch[i], branch[j]
        others = frozenset().union(*(zone_edges[k] for k in range(t) if k not in (i, j)))
        w_ij = frozenset(ledger.used_edges) | others
        balls = {}
        for a, v in ((i, vi), (j, vj)):
            inner, outer = routing_balls(G, {v}, p.r, p.kappa, set(), set(), w_ij)
            profile = measure_ball_growth(G, inner, (ledger.used_vertices - {v}) - inner, p.kappa)
            lines.append(
                f"ball branch={a} inner={len(inner)} outer={len(outer)} "
                f"profile={','.join(map(str, profile))} failures={len(growth_bound_failures(profile))}"
            )
            balls[a] = outer
        route = route_pair(
            G, ledger, (vi, vj), (zones[i], zones[j]), (zone_edges[i], zone_edges[j]),
            (balls[i], balls[j]), set(), w_ij, p.m, p.pair_budget + 2 * (p.kappa + p.r),
        )
        lines.append(
            f"pair {i} {j} len={None if route is None else route.length} mode={None if route is None else route.mode}"
        )
        if route is None:
            return False
        if others.intersection(_path_edges(route.path)):
            raise LedgerInvariantError(f"par ({i},{j}) entra na bola interna de outro ramo")
        ledger.commit((i, j), route.path, others)
        return True

    failures = _maximal_pairs(t, connect, p.expired)
    imm = immersion_from_connections(branch, ledger.paths, host)
    lines.append(f"route=bounded_degree branches={t} connected={len(ledger.pairs)} order={imm.order}")
    logger.info(f"Rota bounded_degree: {t} ramos, ordem {imm.order}")
    return RouteResult("bounded_degree", imm, ledger, failures, deficits, lines)


# ==============================================================================
#      ROTA DE SUBEXPANSORES
# ==============================================================================

@dataclass
class SubexpanderFamily:
    members: list[tuple[Graph, IdMap]] = field(default_factory=list)
    deficits: list[Deficit] = field(default_factory=list)
    density_floor_ok: list[bool] = field(default_factory=list)


def find_subexpanders(Gp: Graph, count: int, p: SparseParams) -> SubexpanderFamily:
    """
    Extrai expansores de G' - U repetidamente, com U a união das 2κ-bolas
    dos já encontrados. A família resultante tem distância mútua > 2κ.
    """
    family = SubexpanderFamily()
    if count <= 0:
        return family
    blocked: set[int] = set()
    d_gp = avg_degree(Gp) if Gp.n else Fraction(0)
    floor = (1 - 3 * as_fraction(p.eta)) * d_gp
    while len(family.members) < count:
        rest, rest_ids = restrict(Gp, blocked)
        if rest.n == 0 or rest.m == 0:
            break
        result = extract_robust_expander(
            rest,
            p.eps1,
            p.eps2,
            p.extraction_rounds,
            exhaustive_limit=p.exhaustive_limit,
            trials=p.trials,
            seed=p.seed + len(family.members),
        )
        if result.degenerate or result.graph.m == 0:
            break
        ids = rest_ids.compose(result.ids)
        family.members.append((result.graph, ids))
        family.density_floor_ok.append(avg_degree(result.graph) >= floor)
        around, _ = ball(Gp, ids.to_host, 2 * p.kappa)
        blocked |= around
        logger.debug(f"Subexpansor {len(family.members)}: n={result.graph.n}, m={result.graph.m}")
    if len(family.members) < count:
        family.deficits.append(Deficit("subexpanders", len(family.members), count))
        logger.warning(family.deficits[-1].to_line())

    hosts = [set(ids.to_host) for _, ids in family.members]
    for a, b in combinations(range(len(hosts)), 2):
        if set_distance(Gp, hosts[a], hosts[b]) <= 2 * p.kappa:
            raise LedgerInvariantError(f"subexpansores {a} e {b} a distância <= 2κ")
    return family


@dataclass
class Kernel:
    branch: int
    host: int
    core: frozenset
    d2_target: float = 0.0
    inner_ball: frozenset = frozenset()
    outer_ball: frozenset = frozenset()

    @property
    def core_ok(self) -> bool:
        return len(self.core) >= self.d2_target


def grow_kernel(Fi: Graph, vi: int, ledger: PathLedger, radius: int, ids: Optional[IdMap] = None, host: int = 0) -> Kernel:
    """
    Núcleo B^radius(v_i) dentro de F_i menos as arestas do registro.

    `vi` está em ids locais de F_i; o núcleo é devolvido em ids do hospedeiro
    de `ids` (identidade quando omitido).
    """
    Fi.check_vertex(vi)
    ids = ids or IdMap.identity(Fi.n)
    local_avoid = {
        canon(ids.to_sub[a], ids.to_sub[b])
        for a, b in ledger.used_edges
        if a in ids.to_sub and b in ids.to_sub
    }
    core, _ = ball(Fi, {vi}, radius, AvoidSet(edges=local_avoid))
    d = float(avg_degree(Fi)) if Fi.n else 0.0
    kernel = Kernel(branch=ids.to_host[vi], host=host, core=frozenset(ids.lift(core)), d2_target=d * d)
    if not kernel.core_ok:
        logger.debug(f"Núcleo de {kernel.branch}: |K|={len(kernel.core)} < d²={kernel.d2_target:.1f}")
    return kernel


def assemble_sparse(
    G: Graph,
    Gp: Graph,
    kernels: list[Kernel],
    p: SparseParams,
    family: Optional[SubexpanderFamily] = None,
    gp_ids: Optional[IdMap] = None,
) -> RouteResult:
    """
    Liga pares de núcleos (ids de G') e devolve a imersão em ids de G.

    Para cada par: núcleo regrado K_i' = B^s_{F_i - W}(v_i), bola interna
    B^r_{G'-W}(K_i') e externa B^{κ+r}_{G'-W}(K_i') fora de U* e de U - {v_i},
    com U* a união das bolas internas fixas dos outros núcleos. O conector
    Q_ij (até m arestas, evitando U* e W) liga as bolas externas e é estendido
    até v_i e v_j por caminhos mais curtos consecutivos; sem emenda, cai para
    o caminho v_i -> v_j mais curto em (G' - W) - U*. Comprimento total até
    m + 2κ + 2r + 2s.
    """
    gp_ids = gp_ids or IdMap.identity(Gp.n)
    host = G.fingerprint()
    t = len(kernels)
    branch = tuple(k.branch for k in kernels)
    zones = [ball(Gp, k.core, p.r)[0] for k in kernels]
    zone_edges = [_induced_edges(Gp, z) for z in zones]
    for k, zone in zip(kernels, zones):
        k.inner_ball = frozenset(zone)
    ledger = PathLedger()
    lines: list[str] = []
    log_n = math.log(max(G.n, 2))

    def connect(i: int, j: int) -> bool:
        if (i, j) in ledger.paths:
            return True
        vi, vj = branch[i], branch[j]
        blocked = set().union(*(zones[k] for k in range(t) if k not in (i, j))) - {vi, vj}
        w = frozenset(ledger.used_edges)
        outers = {}
        for a, v in ((i, vi), (j, vj)):
            k = kernels[a]
            if family is not None:
                Fa, ids_a = family.members[k.host]
                regrown = grow_kernel(Fa, ids_a.to_sub[k.branch], ledger, p.ball_exp, ids_a, k.host)
                core = set(regrown.core)
                lines.append(f"kernel_core kernel={a} size={len(core)} target={regrown.d2_target:.1f} ok={regrown.core_ok}")
            else:
                core = set(k.core)
            used = ledger.used_vertices - {v}
            inner, outer = routing_balls(Gp, core, p.r, p.kappa, blocked, used, w)
            inner_target = float(p.d) ** 2 * log_n ** 7
            lines.append(f"kernel_inner kernel={a} size={len(inner)} target={inner_target:.1f} ok={len(inner) >= inner_target}")
            if inner:
                profile = measure_ball_growth(Gp, inner, (blocked | used) - inner, p.kappa)
                lines.append(
                    f"growth kernel={a} outer={len(outer)} profile={','.join(map(str, profile))} "
                    f"failures={len(growth_bound_failures(profile))}"
                )
            k.outer_ball = frozenset(outer)
            outers[a] = outer
        route = route_pair(
            Gp, ledger, (vi, vj), (zones[i], zones[j]), (zone_edges[i], zone_edges[j]),
            (outers[i], outers[j]), blocked, w, p.m, p.assembly_budget,
        )
        lines.append(
            f"pair {i} {j} len={None if route is None else route.length} mode={None if route is None else route.mode}"
        )
        if route is None:
            return False
        if blocked.intersection(route.path):
            raise LedgerInvariantError(f"par ({i},{j}) entra na bola interna de outro núcleo")
        ledger.commit((i, j), route.path, frozenset(blocked))
        return True

    failures = _maximal_pairs(t, connect, p.expired)
    local = immersion_from_connections(branch, ledger.paths, host)
    imm = local.lift(gp_ids, host)
    lines.append(f"route=subexpander kernels={t} connected={len(ledger.pairs)} order={imm.order}")
    logger.info(f"Rota subexpander: {t} núcleos, ordem {imm.order}")
    deficits = list(family.deficits) if family is not None else []
    return RouteResult("subexpander", imm, ledger, failures, deficits, lines)


def _subexpander_route(G: Graph, Gp: Graph, gp_ids: IdMap, p: SparseParams) -> RouteResult:
    family = find_subexpanders(Gp, p.target_order, p)
    kernels: list[Kernel] = []
    for idx, (F, ids) in enumerate(family.members):
        vi = min(range(F.n), key=lambda v: (-F.degree(v), v))
        kernels.append(grow_kernel(F, vi, PathLedger(), p.ball_exp, ids, idx))
    return assemble_sparse(G, Gp, kernels, p, family, gp_ids)


# ==============================================================================
#      DESPACHO
# ==============================================================================

@dataclass
class SparseOutcome:
    immersion: Immersion
    fired: str
    route: str
    z1_size: int
    density_retained_ok: Optional[bool]
    d_prime: Optional[Fraction]
    orders: dict[str, int] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)


def embed_sparse(G: Graph, p: SparseParams) -> SparseOutcome:
    """
    Z1 por limiar; rota de grau alto se |Z1| >= alvo, senão G' = G - Z1 e
    rota de grau limitado ou de subexpansores conforme Δ(G').

    Com `try_all_routes`, todas as rotas viáveis rodam (inclusive grau alto
    sobre {grau >= d(G)}) e vence a de maior ordem verificada, empates pela
    prioridade em ROUTE_PRIORITY.
    """
    host = G.fingerprint()
    if G.n == 0:
        return SparseOutcome(Immersion.empty(host), "empty", "empty", 0, None, None)
    Z1 = [v for v in range(G.n) if G.degree(v) >= p.z1_threshold]
    lines = p.header() + [f"z1_size={len(Z1)}"]
    Gp, gp_ids = restrict(G, Z1)
    density_retained_ok: Optional[bool] = None
    d_prime: Optional[Fraction] = None
    if Gp.n:
        d_prime = avg_degree(Gp)
        density_retained_ok = d_prime >= p.d - as_fraction(p.eta) * p.d
        lines.append(f"d_prime={float(d_prime):.6f} density_retained_ok={density_retained_ok}")
        if not density_retained_ok:
            logger.warning(f"d(G')={float(d_prime):.3f} abaixo de d(G) - ηd")

    if len(Z1) >= p.target_order:
        fired = "high_degree"
    elif Gp.n and Gp.max_degree() <= p.degree_gate:
        fired = "bounded_degree"
    else:
        fired = "subexpander"
    lines.append(f"fired={fired}")
    logger.info(f"Caso esparso: {fired} (|Z1|={len(Z1)}, alvo {p.target_order})")

    runners: dict[str, Callable[[], RouteResult]] = {}
    if len(Z1) >= p.target_order:
        runners["high_degree"] = lambda: embed_high_degree(G, Z1, p)
    if p.try_all_routes:
        relaxed = [v for v in range(G.n) if G.degree(v) >= p.d]
        if len(relaxed) >= p.target_order:
            runners["high_degree_relaxed"] = lambda: embed_high_degree(G, relaxed, p, "high_degree_relaxed")
    if Gp.n and (p.try_all_routes or fired == "bounded_degree"):
        runners["bounded_degree"] = lambda: _lift_route(embed_bounded_degree(Gp, p), gp_ids, host)
    if Gp.n and (p.try_all_routes or fired == "subexpander"):
        runners["subexpander"] = lambda: _subexpander_route(G, Gp, gp_ids, p)

    best: Optional[RouteResult] = None
    orders: dict[str, int] = {}
    for name in ROUTE_PRIORITY:
        if name not in runners:
            continue
        if p.expired() and best is not None:
            logger.warning(f"Tempo esgotado: rota {name} não executada")
            lines.append(f"skipped={name}")
            continue
        result = runners[name]()
        report = verify_immersion(G, result.immersion)
        if not report.ok:
            raise LedgerInvariantError(f"rota {name} emitiu certificado inválido: {report.first.to_line()}")
        orders[name] = result.order
        lines.extend(result.lines)
        lines.extend(d.to_line() for d in result.deficits)
        if best is None or result.order > best.order:
            best = result

    if best is None:
        imm = Immersion(branch=(0,), paths={}, host_id=host)
        return SparseOutcome(imm, fired, "trivial", len(Z1), density_retained_ok, d_prime, orders, lines)
    lines.append(f"winner={best.route} order={best.order}")
    return SparseOutcome(best.immersion, fired, best.route, len(Z1), density_retained_ok, d_prime, orders, lines)


def _lift_route(result: RouteResult, ids: IdMap, host: str) -> RouteResult:
    result.immersion = result.immersion.lift(ids, host)
    return result
