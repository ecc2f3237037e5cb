# -*- coding: utf-8 -*-
"""
Camada de expansores sublineares robustos.

Contém a função rho, o adversário exato de remoção de arestas, a
certificação (exaustiva até n = 20, amostrada acima disso), a extração
heurística por poda + corte e o buscador de caminhos com desvio.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Union

import numpy as np
from joblib import Parallel, delayed

from ... import config_immersion as cfg
from ..errors import CertificateFormatError, ParameterError
from .graph_core import (
    AvoidSet,
    Edge,
    Graph,
    IdMap,
    as_fraction,
    avg_degree,
    bfs_layers,
    canon,
    external_neighborhood,
    induced_subgraph,
    restrict,
)

logger = logging.getLogger(__name__)

__all__ = [
    "RhoParams",
    "rho",
    "deletion_allowance",
    "adversarial_neighborhood",
    "VerdictStatus",
    "Witness",
    "ExpansionVerdict",
    "Exhaustive",
    "Sampled",
    "certify_robust_expansion",
    "replay_witness",
    "ExtractionResult",
    "extract_robust_expander",
    "PathResult",
    "theoretical_path_budget",
    "find_avoiding_path",
    "validate_path",
    "measure_ball_growth",
    "growth_bound_failures",
]


# ==============================================================================
#      FUNÇÃO RHO E ADVERSÁRIO
# ==============================================================================

@dataclass(frozen=True)
class RhoParams:
    eps1: float
    k: float

    def __post_init__(self):
        if self.eps1 <= 0 or self.k <= 0:
            raise ParameterError(f"eps1 e k devem ser positivos (eps1={self.eps1}, k={self.k})")

    @property
    def theoretical_range(self) -> bool:
        return self.eps1 <= cfg.EPS1_MAX_TEORICO


def rho(x: float, p: RhoParams) -> float:
    """0 para x < k/5; caso contrário eps1 / log^2(15x/k), log natural."""
    if x < p.k / 5:
        return 0.0
    return p.eps1 / math.log(15 * x / p.k) ** 2


def deletion_allowance(d: Fraction, p: RhoParams, size: int) -> int:
    """Orçamento do adversário: floor(d(G) * rho(|X|) * |X|)."""
    return math.floor(float(d) * rho(size, p) * size)


def adversarial_neighborhood(G: Graph, X: Iterable[int], budget: int) -> tuple[int, frozenset]:
    """
    Mínimo exato de |N_{G\\F}(X)| sobre |F| <= budget.

    Tirar u de N(X) custa todas as e(u, X) arestas; remover primeiro os
    vizinhos de menor multiplicidade é ótimo.

    Returns:
        (tamanho mínimo, F ótimo como conjunto de arestas canônicas)
    """
    xs = set(X)
    if not xs:
        raise ValueError("X não pode ser vazio")
    mult: Counter = Counter()
    for v in xs:
        G.check_vertex(v)
        for u in G.adjacency[v]:
            if u not in xs:
                mult[u] += 1
    spent = 0
    removed: list[int] = []
    for u in sorted(mult, key=lambda w: (mult[w], w)):
        if spent + mult[u] > budget:
            break
        spent += mult[u]
        removed.append(u)
    witness = frozenset(canon(u, v) for u in removed for v in G.adjacency[u] if v in xs)
    return len(mult) - len(removed), witness


# ==============================================================================
#      CERTIFICAÇÃO
# ==============================================================================

class VerdictStatus(str, Enum):
    CERTIFIED_EXPANDER = "CertifiedExpander"
    CERTIFIED_NON_EXPANDER = "CertifiedNonExpander"
    SAMPLED_PASS = "SampledPass"


@dataclass(frozen=True)
class Witness:
    """Par (X, F) que viola a condição de expansão."""

    X: frozenset
    F: frozenset

    def to_text(self) -> str:
        xs = " ".join(str(v) for v in sorted(self.X))
        fs = " ".join(f"{u}-{w}" for u, w in sorted(self.F))
        return f"X: {xs}\nF: {fs}\n"

    @classmethod
    def from_text(cls, text: str) -> "Witness":
        xs: Optional[frozenset] = None
        fs: frozenset = frozenset()
        try:
            for raw in text.splitlines():
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, rest = line.partition(":")
                if key == "X":
                    xs = frozenset(int(tok) for tok in rest.split())
                elif key == "F":
                    pairs = (tok.split("-") for tok in rest.split())
                    fs = frozenset(canon(int(a), int(b)) for a, b in pairs)
                else:
                    raise CertificateFormatError(f"linha de testemunha desconhecida: '{line}'")
        except ValueError as exc:
            raise CertificateFormatError(f"testemunha malformada: {exc}") from exc
        if not xs:
            raise CertificateFormatError("testemunha sem linha 'X:'")
        return cls(X=xs, F=fs)


@dataclass(frozen=True)
class ExpansionVerdict:
    status: VerdictStatus
    witness: Optional[Witness] = None
    samples_tried: int = 0
    note: str = ""

    @property
    def is_certificate(self) -> bool:
        return self.status != VerdictStatus.SAMPLED_PASS

    @property
    def passed(self) -> bool:
        return self.status != VerdictStatus.CERTIFIED_NON_EXPANDER


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Sampled:
    seed: int = 0
    trials: int = cfg.AMOSTRAS_CERTIFICACAO
    workers: int = 1


CertifyMode = Union[Exhaustive, Sampled]


def _size_window(n: int, k: float) -> tuple[int, int]:
    return max(1, math.ceil(k / 2)), n // 2


def _violation(G: Graph, d: Fraction, p: RhoParams, X: frozenset) -> Optional[Witness]:
    budget = deletion_allowance(d, p, len(X))
    size, F = adversarial_neighborhood(G, X, budget)
    if size < rho(len(X), p) * len(X):
        return Witness(X=X, F=F)
    return None


def _exhaustive_scan(G: Graph, d: Fraction, p: RhoParams) -> Optional[Witness]:
    lo, hi = _size_window(G.n, p.k)
    masks = [sum(1 << u for u in G.adjacency[v]) for v in range(G.n)]
    for size in range(lo, hi + 1):
        budget = deletion_allowance(d, p, size)
        required = rho(size, p) * size
        for combo in combinations(range(G.n), size):
            x_mask = 0
            reach = 0
            for v in combo:
                x_mask |= 1 << v
                reach |= masks[v]
            reach &= ~x_mask
            boundary = reach.bit_count()
            if budget == 0:
                worst = boundary
            else:
                costs = sorted((masks[u] & x_mask).bit_count() for u in _bits(reach))
                removed = spent = 0
                for c in costs:
                    if spent + c > budget:
                        break
                    spent += c
                    removed += 1
                worst = boundary - removed
            if worst < required:
                return _violation(G, d, p, frozenset(combo))
    return None


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _ball_seeds(G: Graph, lo: int, hi: int) -> list[frozenset]:
    seeds: dict[frozenset, None] = {}
    for v in range(G.n):
        dist, _ = bfs_layers(G, [v])
        by_radius = sorted(dist.items(), key=lambda item: (item[1], item[0]))
        acc: set[int] = set()
        for idx, (u, r) in enumerate(by_radius):
            acc.add(u)
            closes_layer = idx + 1 == len(by_radius) or by_radius[idx + 1][1] != r
            if closes_layer and lo <= len(acc) <= hi:
                seeds.setdefault(frozenset(acc), None)
    return list(seeds)


def _random_connected_set(G: Graph, seed: int, index: int, lo: int, hi: int) -> frozenset:
    """Conjunto conexo crescido por BFS aleatória; semente derivada de (seed, index)."""
    rng = np.random.default_rng([seed, index])
    target = int(rng.integers(lo, hi + 1))
    start = int(rng.integers(G.n))
    chosen = {start}
    frontier = sorted(set(G.adjacency[start]))
    while len(chosen) < target and frontier:
        pick = frontier.pop(int(rng.integers(len(frontier))))
        chosen.add(pick)
        frontier = sorted(set(frontier) | {w for w in G.adjacency[pick] if w not in chosen})
    return frozenset(chosen)


def certify_robust_expansion(
    G: Graph, eps1: float, eps2: float, mode: CertifyMode = Exhaustive()
) -> ExpansionVerdict:
    """
    Testa a condição de expansão robusta com k = eps2 * d(G).

    Exhaustive enumera todos os X com k/2 <= |X| <= n/2 (n <= 20).
    Sampled testa as bolas de vértice único e `trials` conjuntos conexos
    aleatórios; aprovação nesse modo nunca é rotulada como certificado.
    """
    if isinstance(mode, Exhaustive) and G.n > cfg.LIMITE_EXAUSTIVO_MAXIMO:
        raise ParameterError(
            f"modo exaustivo exige n <= {cfg.LIMITE_EXAUSTIVO_MAXIMO} (recebido n={G.n})"
        )
    if isinstance(mode, Sampled) and mode.trials == 0:
        return ExpansionVerdict(VerdictStatus.SAMPLED_PASS, samples_tried=0)

    d = avg_degree(G) if G.n else Fraction(0)
    if d == 0:
        status = VerdictStatus.CERTIFIED_EXPANDER if isinstance(mode, Exhaustive) else VerdictStatus.SAMPLED_PASS
        return ExpansionVerdict(status, note="grau médio zero: condição vazia")

    p = RhoParams(eps1=eps1, k=eps2 * float(d))
    if isinstance(mode, Exhaustive):
        witness = _exhaustive_scan(G, d, p)
        if witness is not None:
            logger.debug(f"Violação exaustiva: |X|={len(witness.X)}, |F|={len(witness.F)}")
            return ExpansionVerdict(VerdictStatus.CERTIFIED_NON_EXPANDER, witness=witness)
        return ExpansionVerdict(VerdictStatus.CERTIFIED_EXPANDER)

    lo, hi = _size_window(G.n, p.k)
    if lo > hi:
        return ExpansionVerdict(VerdictStatus.SAMPLED_PASS, note="janela de tamanhos vazia")
    candidates = _ball_seeds(G, lo, hi)
    if mode.workers > 1:
        randoms = Parallel(n_jobs=mode.workers)(
            delayed(_random_connected_set)(G, mode.seed, i, lo, hi) for i in range(mode.trials)
        )
    else:
        randoms = [_random_connected_set(G, mode.seed, i, lo, hi) for i in range(mode.trials)]
    candidates.extend(randoms)
    # só conjuntos dentro da janela contam como amostras
    tried = 0
    for X in candidates:
        if not lo <= len(X) <= hi:
            continue
        tried += 1
        witness = _violation(G, d, p, X)
        if witness is not None:
            return ExpansionVerdict(VerdictStatus.CERTIFIED_NON_EXPANDER, witness=witness, samples_tried=tried)
    return ExpansionVerdict(VerdictStatus.SAMPLED_PASS, samples_tried=tried)


def replay_witness(G: Graph, witness: Witness, eps1: float, eps2: float) -> bool:
    """Confere que (X, F) viola de fato a expansão: tamanho, orçamento e vizinhança."""
    d = avg_degree(G)
    if d == 0:
        return False
    p = RhoParams(eps1=eps1, k=eps2 * float(d))
    lo, hi = _size_window(G.n, p.k)
    size = len(witness.X)
    if not lo <= size <= hi:
        return False
    if len(witness.F) > deletion_allowance(d, p, size):
        return False
    if any(not G.has_edge(u, v) for u, v in witness.F):
        return False
    boundary = external_neighborhood(G, witness.X, AvoidSet(edges=set(witness.F)))
    return len(boundary) < rho(size, p) * size


# ==============================================================================
#      EXTRAÇÃO (PODA + CORTE)
# ==============================================================================

@dataclass
class ExtractionResult:
    graph: Graph
    ids: IdMap
    verdict: ExpansionVerdict
    complete: bool = True
    degenerate: bool = False
    rounds: int = 0
    density_ok: bool = True
    min_degree_ok: bool = True
    history: list[str] = field(default_factory=list)


def _peel(current: Graph, ids: IdMap) -> tuple[Graph, IdMap]:
    """Remove repetidamente vértices de grau < d(atual)/2."""
    while current.n > 1:
        d = avg_degree(current)
        low = [v for v in range(current.n) if current.degree(v) < d / 2]
        if not low or len(low) == current.n:
            break
        current, inner = restrict(current, low)
        ids = ids.compose(inner)
    return current, ids


def extract_robust_expander(
    G: Graph,
    eps1: float,
    eps2: float,
    max_rounds: int = cfg.RODADAS_EXTRACAO,
    *,
    exhaustive_limit: int = cfg.LIMITE_EXAUSTIVO_MAXIMO,
    trials: int = cfg.AMOSTRAS_CERTIFICACAO,
    seed: int = 0,
    workers: int = 1,
) -> ExtractionResult:
    """
    Extrai um subgrafo candidato a expansor robusto.

    Cada rodada poda vértices de grau baixo e certifica; havendo testemunha
    (X, F), segue no lado mais denso do corte G[X ∪ N_{G\\F}(X)] vs G - X.
    O resultado é sempre recertificado; sem ponto fixo em `max_rounds`
    o melhor subgrafo vem marcado como incompleto.
    """
    if G.n == 0:
        raise ValueError("extração exige n >= 1")
    d0 = avg_degree(G)
    if d0 == 0:
        logger.warning("Grafo sem arestas: extração degenerada para um único vértice")
        return ExtractionResult(
            graph=Graph.empty(1),
            ids=IdMap.from_host_ids([0]),
            verdict=ExpansionVerdict(VerdictStatus.CERTIFIED_EXPANDER, note="grau médio zero"),
            degenerate=True,
            history=["degenerado: d(G)=0"],
        )

    current, ids = G, IdMap.identity(G.n)
    history: list[str] = []
    verdict = ExpansionVerdict(VerdictStatus.SAMPLED_PASS)
    complete = False
    rounds = 0
    for rounds in range(max_rounds + 1):
        current, ids = _peel(current, ids)
        if current.n <= exhaustive_limit:
            mode: CertifyMode = Exhaustive()
        else:
            mode = Sampled(seed=seed + rounds, trials=trials, workers=workers)
        verdict = certify_robust_expansion(current, eps1, eps2, mode)
        history.append(f"rodada={rounds} n={current.n} m={current.m} status={verdict.status.value}")
        if verdict.passed:
            complete = True
            break
        if rounds == max_rounds:
            break
        X = verdict.witness.X
        boundary = external_neighborhood(current, X, AvoidSet(edges=set(verdict.witness.F)))
        sides = [set(X) | boundary, set(range(current.n)) - set(X)]
        best = None
        for side in sides:
            if not 0 < len(side) < current.n:
                continue
            sub, inner = induced_subgraph(current, side)
            density = avg_degree(sub)
            if best is None or density > best[0]:
                best = (density, sub, inner)
        if best is None or best[0] == 0:
            history.append("corte sem lado utilizável")
            break
        current, ids = best[1], ids.compose(best[2])

    d_final = avg_degree(current)
    eta = cfg.CONSTANTE_EXTRACAO * eps1 / cfg.LOG3
    result = ExtractionResult(
        graph=current,
        ids=ids,
        verdict=verdict,
        complete=complete,
        rounds=rounds,
        density_ok=d_final >= (1 - as_fraction(eta)) * d0,
        min_degree_ok=current.min_degree() >= d_final / 2,
        history=history,
    )
    if not complete:
        logger.warning(f"Extração incompleta após {rounds} rodadas (n={current.n})")
    logger.info(
        f"Extração: n={current.n}, d={float(d_final):.3f}, status={verdict.status.value}, completa={complete}"
    )
    return result


# ==============================================================================
#      CAMINHOS COM DESVIO
# ==============================================================================

@dataclass(frozen=True)
class PathResult:
    path: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def edges(self) -> list[Edge]:
        return [canon(a, b) for a, b in zip(self.path, self.path[1:])]


def theoretical_path_budget(n: int, d: Fraction, eps1: float, eps2: float) -> int:
    """m = (2/eps1) log^3(15n/(eps2 d)), arredondado para cima e no mínimo 1."""
    if d == 0:
        return max(1, n)
    inner = math.log(15 * n / (eps2 * float(d)))
    return max(1, math.ceil(2 / eps1 * max(inner, 0.0) ** 3))


def find_avoiding_path(
    G: Graph,
    X1: Iterable[int],
    X2: Iterable[int],
    avoid: Optional[AvoidSet] = None,
    max_len: Optional[int] = None,
    *,
    eps1: float = cfg.EPS1_PADRAO,
    eps2: float = cfg.EPS2_PADRAO,
) -> Optional[PathResult]:
    """
    Caminho (X1, X2) mais curto em (G\\F)-Y com até `max_len` arestas.

    O interior evita X1 ∪ X2; extremidades em `avoid.forbidden_endpoints`
    não são aceitas. Retorna None quando não existe caminho dentro do limite.
    """
    x1, x2 = set(X1), set(X2)
    if not x1 or not x2:
        raise ValueError("X1 e X2 não podem ser vazios")
    avoid = avoid or AvoidSet()
    if (x1 | x2) & avoid.vertices:
        raise ValueError("X1/X2 intersectam os vértices proibidos")
    if max_len is None:
        max_len = theoretical_path_budget(G.n, avg_degree(G), eps1, eps2)

    forbidden = avoid.forbidden_endpoints
    banned_v, banned_e = avoid.vertices, avoid.edges
    starts = sorted(v for v in x1 if v not in forbidden)
    targets = {v for v in x2 if v not in forbidden}
    for s in starts:
        if s in targets:
            return PathResult((s,))

    dist = {s: 0 for s in starts}
    parent: dict[int, Optional[int]] = {s: None for s in starts}
    queue = list(starts)
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        du = dist[u]
        if du >= max_len:
            continue
        for w in G.adjacency[u]:
            if w in dist or w in banned_v:
                continue
            if banned_e and canon(u, w) in banned_e:
                continue
            if w in targets:
                walk = [w, u]
                while parent[walk[-1]] is not None:
                    walk.append(parent[walk[-1]])
                return PathResult(tuple(reversed(walk)))
            if w in x1 or w in x2:
                continue
            dist[w] = du + 1
            parent[w] = u
            queue.append(w)
    return None


def validate_path(
    G: Graph, result: PathResult, X1: Iterable[int], X2: Iterable[int], avoid: Optional[AvoidSet] = None
) -> list[str]:
    """Lista de problemas do caminho (vazia quando todas as regras valem)."""
    x1, x2 = set(X1), set(X2)
    avoid = avoid or AvoidSet()
    path = result.path
    problems: list[str] = []
    if not path:
        return ["caminho vazio"]
    if path[0] not in x1 or path[-1] not in x2:
        problems.append("extremidades fora de X1/X2")
    if path[0] in avoid.forbidden_endpoints or path[-1] in avoid.forbidden_endpoints:
        problems.append("extremidade proibida")
    for a, b in zip(path, path[1:]):
        if not G.has_edge(a, b):
            problems.append(f"passo {a}-{b} não é aresta")
        elif canon(a, b) in avoid.edges:
            problems.append(f"aresta proibida {a}-{b}")
    for v in path[1:-1]:
        if v in avoid.vertices:
            problems.append(f"interior {v} proibido")
        if v in x1 or v in x2:
            problems.append(f"interior {v} em X1 ∪ X2")
    if any(v in avoid.vertices for v in (path[0], path[-1])):
        problems.append("extremidade em vértices proibidos")
    return problems


def measure_ball_growth(G: Graph, X: Iterable[int], Y: Iterable[int], max_radius: int) -> list[int]:
    """Perfil exato |B^i_{G-Y}(X)| para i = 0..max_radius."""
    xs, ys = set(X), set(Y)
    if not xs:
        raise ValueError("X não pode ser vazio")
    if xs & ys:
        raise ValueError("X e Y devem ser disjuntos")
    dist, _ = bfs_layers(G, xs, AvoidSet(vertices=ys), max_radius)
    per_layer = Counter(dist.values())
    profile = []
    total = 0
    for i in range(max_radius + 1):
        total += per_layer.get(i, 0)
        profile.append(total)
    return profile


def growth_bound_failures(profile: list[int]) -> list[int]:
    """Raios i em que |B^i| < exp(i^(1/4))."""
    return [i for i, size in enumerate(profile) if size < math.exp(i ** 0.25)]
