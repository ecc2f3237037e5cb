# -*- coding: utf-8 -*-
"""
Certificados de imersão, verificador, baseline guloso e oráculo exaustivo.

Formato de certificado (texto):
    order t
    branch i v
    path i j v0 v1 ... vk
Linhas com '#' são comentários; '# host <id>' carrega a impressão digital
do grafo hospedeiro.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Mapping, Optional, Sequence

import networkx as nx

from ... import config_immersion as cfg
from ..errors import BudgetExceeded, CertificateFormatError
from .graph_core import Graph, IdMap, canon

logger = logging.getLogger(__name__)

__all__ = [
    "Immersion",
    "ViolationKind",
    "Violation",
    "VerifyReport",
    "verify_immersion",
    "format_certificate",
    "parse_certificate",
    "greedy_baseline",
    "OracleResult",
    "oracle_max_immersion",
    "immersion_from_connections",
]


@dataclass
class Immersion:
    """Injeção dos vértices de K_t (branch) e um caminho por par {i, j}, i < j."""

    branch: tuple[int, ...]
    paths: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    host_id: str = ""

    @property
    def order(self) -> int:
        return len(self.branch)

    @classmethod
    def empty(cls, host_id: str = "") -> "Immersion":
        return cls(branch=(), paths={}, host_id=host_id)

    def lift(self, ids: IdMap, host_id: str = "") -> "Immersion":
        """Traduz um certificado de subgrafo para ids do hospedeiro."""
        return Immersion(
            branch=tuple(ids.to_host[v] for v in self.branch),
            paths={key: tuple(ids.to_host[v] for v in p) for key, p in self.paths.items()},
            host_id=host_id or self.host_id,
        )

    def edge_count(self) -> int:
        return sum(len(p) - 1 for p in self.paths.values())


class ViolationKind(str, Enum):
    NON_INJECTIVE = "NonInjective"
    BAD_ENDPOINT = "BadEndpoint"
    NON_EDGE = "NonEdge"
    EDGE_REUSE = "EdgeReuse"
    STRONG_VIOLATION = "StrongViolation"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    locus: str
    pair: Optional[tuple[int, int]] = None

    def to_line(self) -> str:
        return f"{self.kind.value}: {self.locus}"


@dataclass
class VerifyReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}


def verify_immersion(G: Graph, imm: Immersion, strong: bool = False) -> VerifyReport:
    """
    Confere injetividade, extremidades, adjacência de cada passo e
    disjunção global de arestas (multiconjunto de arestas canônicas).

    No modo forte, interiores de caminhos não podem tocar vértices de ramo.
    Entradas malformadas viram violações, nunca exceções.
    """
    report = VerifyReport()
    add = report.violations.append
    t = len(imm.branch)

    owner: dict[int, int] = {}
    for i, v in enumerate(imm.branch):
        if not isinstance(v, int) or not 0 <= v < G.n:
            add(Violation(ViolationKind.BAD_ENDPOINT, f"ramo {i} aponta para vértice inexistente {v}"))
        elif v in owner:
            add(Violation(ViolationKind.NON_INJECTIVE, f"ramos {owner[v]} e {i} usam o vértice {v}"))
        else:
            owner[v] = i

    for key in sorted(imm.paths, key=lambda k: tuple(k)):
        i, j = key
        if not 0 <= i < j < t:
            add(Violation(ViolationKind.BAD_ENDPOINT, f"par malformado {key}", key))

    usage: Counter = Counter()
    branch_set = set(imm.branch)
    for i, j in combinations(range(t), 2):
        path = imm.paths.get((i, j))
        if path is None:
            add(Violation(ViolationKind.BAD_ENDPOINT, f"par ({i},{j}) sem caminho", (i, j)))
            continue
        if not path or path[0] != imm.branch[i] or path[-1] != imm.branch[j]:
            add(Violation(
                ViolationKind.BAD_ENDPOINT,
                f"par ({i},{j}) deveria ligar {imm.branch[i]} a {imm.branch[j]}",
                (i, j),
            ))
        for step, (a, b) in enumerate(zip(path, path[1:])):
            if not (0 <= a < G.n and 0 <= b < G.n) or not G.has_edge(a, b):
                add(Violation(ViolationKind.NON_EDGE, f"par ({i},{j}) passo {step}: {a}-{b}", (i, j)))
                continue
            e = canon(a, b)
            if usage[e]:
                add(Violation(ViolationKind.EDGE_REUSE, f"par ({i},{j}) reusa aresta {e[0]}-{e[1]}", (i, j)))
            usage[e] += 1
        if strong:
            hits = [v for v in path[1:-1] if v in branch_set]
            if hits:
                add(Violation(
                    ViolationKind.STRONG_VIOLATION,
                    f"par ({i},{j}) passa pelo vértice de ramo {hits[0]}",
                    (i, j),
                ))
    return report


# ==============================================================================
#      FORMATO DE CERTIFICADO
# ==============================================================================

def format_certificate(imm: Immersion) -> str:
    lines = []
    if imm.host_id:
        lines.append(f"# host {imm.host_id}")
    lines.append(f"order {imm.order}")
    lines.extend(f"branch {i} {v}" for i, v in enumerate(imm.branch))
    for (i, j) in sorted(imm.paths):
        lines.append(f"path {i} {j} " + " ".join(str(v) for v in imm.paths[(i, j)]))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Immersion:
    order: Optional[int] = None
    host_id = ""
    branch: dict[int, int] = {}
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "host":
                host_id = parts[1]
            continue
        head, *rest = line.split()
        try:
            values = [int(tok) for tok in rest]
        except ValueError as exc:
            raise CertificateFormatError(f"linha {lineno}: inteiro inválido ({exc})") from exc
        if head == "order" and len(values) == 1:
            order = values[0]
        elif head == "branch" and len(values) == 2:
            if values[0] in branch:
                raise CertificateFormatError(f"linha {lineno}: ramo {values[0]} repetido")
            branch[values[0]] = values[1]
        elif head == "path" and len(values) >= 3:
            i, j, *walk = values
            if i == j:
                raise CertificateFormatError(f"linha {lineno}: par com i = j = {i}")
            if i > j:
                i, j = j, i
                walk = walk[::-1]
            if (i, j) in paths:
                raise CertificateFormatError(f"linha {lineno}: par ({i},{j}) repetido")
            paths[(i, j)] = tuple(walk)
        else:
            raise CertificateFormatError(f"linha {lineno}: registro desconhecido '{line}'")
    if order is None:
        raise CertificateFormatError("linha 'order' ausente")
    if sorted(branch) != list(range(order)):
        raise CertificateFormatError(f"ramos declarados {sorted(branch)} não cobrem 0..{order - 1}")
    return Immersion(branch=tuple(branch[i] for i in range(order)), paths=paths, host_id=host_id)


# ==============================================================================
#      BASELINE E SUBFAMÍLIA CONECTADA
# ==============================================================================

def greedy_baseline(G: Graph) -> Immersion:
    """Clique gulosa (maior grau primeiro, empates por id) como imersão de arestas simples."""
    host = G.fingerprint()
    if G.n == 0:
        return Immersion.empty(host)
    rank = lambda v: (-G.degree(v), v)  # noqa: E731
    seed = min(range(G.n), key=rank)
    clique = [seed]
    candidates = set(G.adjacency[seed])
    while candidates:
        pick = min(candidates, key=rank)
        clique.append(pick)
        candidates &= set(G.adjacency[pick])
    branch = tuple(sorted(clique))
    paths = {(i, j): (branch[i], branch[j]) for i, j in combinations(range(len(branch)), 2)}
    return Immersion(branch=branch, paths=paths, host_id=host)


def immersion_from_connections(
    branch: Sequence[int],
    paths: Mapping[tuple[int, int], Sequence[int]],
    host_id: str = "",
) -> Immersion:
    """
    Maior subfamília de vértices de ramo com todos os pares conectados.

    `paths[(i, j)]` (i < j) vai de branch[i] a branch[j]. A escolha é uma
    clique máxima do grafo de pares conectados.
    """
    if not branch:
        return Immersion.empty(host_id)
    H = nx.Graph()
    H.add_nodes_from(range(len(branch)))
    H.add_edges_from(paths.keys())
    clique, _ = nx.max_weight_clique(H, weight=None)
    keep = sorted(clique)
    new_branch = tuple(branch[i] for i in keep)
    new_paths = {
        (a, b): tuple(paths[(keep[a], keep[b])])
        for a, b in combinations(range(len(keep)), 2)
    }
    return Immersion(branch=new_branch, paths=new_paths, host_id=host_id)


# ==============================================================================
#      ORÁCULO
# ==============================================================================

@dataclass
class OracleResult:
    max_order: int
    certificate: Immersion
    exact: bool = True
    nodes: int = 0


class _PathSystemSearch:
    """Retrocesso sobre sistemas de caminhos aresta-disjuntos para um conjunto de ramos."""

    def __init__(self, G: Graph, budget: int):
        self.G = G
        self.budget = budget
        self.nodes = 0
        self.edge_ids = {e: idx for idx, e in enumerate(G.edges())}
        self.m = len(self.edge_ids)
        self.incident = [0] * G.n
        for (u, v), idx in self.edge_ids.items():
            self.incident[u] |= 1 << idx
            self.incident[v] |= 1 << idx

    def _simple_paths(self, src: int, dst: int, used: int) -> list[tuple[tuple[int, ...], int]]:
        found: list[tuple[tuple[int, ...], int]] = []
        stack = [(src, (src,), 0)]
        while stack:
            v, walk, mask = stack.pop()
            for w in self.G.adjacency[v]:
                bit = 1 << self.edge_ids[canon(v, w)]
                if used & bit or w in walk:
                    continue
                if w == dst:
                    found.append((walk + (w,), mask | bit))
                else:
                    stack.append((w, walk + (w,), mask | bit))
        found.sort(key=lambda item: (len(item[0]), item[0]))
        return found

    def solve(self, branch: tuple[int, ...]) -> Optional[dict[tuple[int, int], tuple[int, ...]]]:
        t = len(branch)
        pairs = list(combinations(range(t), 2))
        need = [[0] * t for _ in range(len(pairs) + 1)]
        for idx in range(len(pairs) - 1, -1, -1):
            need[idx] = list(need[idx + 1])
            a, b = pairs[idx]
            need[idx][a] += 1
            need[idx][b] += 1
        failed: set[tuple[int, int]] = set()

        def step(idx: int, used: int) -> Optional[list[tuple[int, ...]]]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"oráculo excedeu {self.budget} nós")
            if idx == len(pairs):
                return []
            if (idx, used) in failed:
                return None
            if self.m - used.bit_count() < len(pairs) - idx:
                failed.add((idx, used))
                return None
            for b in range(t):
                if (self.incident[branch[b]] & ~used).bit_count() < need[idx][b]:
                    failed.add((idx, used))
                    return None
            a, b = pairs[idx]
            for walk, mask in self._simple_paths(branch[a], branch[b], used):
                rest = step(idx + 1, used | mask)
                if rest is not None:
                    return [walk] + rest
            failed.add((idx, used))
            return None

        chosen = step(0, 0)
        if chosen is None:
            return None
        return dict(zip(pairs, chosen))


def _default_cap(G: Graph) -> int:
    degrees = sorted((G.degree(v) for v in range(G.n)), reverse=True)
    cap = 1
    for t in range(2, G.n + 1):
        if t * (t - 1) // 2 <= G.m and degrees[t - 1] >= t - 1:
            cap = t
    return cap


def oracle_max_immersion(
    G: Graph, cap_order: Optional[int] = None, budget: int = cfg.ORACULO_ORCAMENTO
) -> OracleResult:
    """
    Ordem máxima de imersão de clique por busca exaustiva (exata para n <= 8, m <= 16).

    Para t decrescente, enumera t-subconjuntos de ramos (grau >= t-1) e
    procura caminhos par a par em ordem de comprimento, podando quando faltam
    arestas livres. Estourado o orçamento, devolve o baseline guloso como
    cota inferior com `exact=False`.
    """
    host = G.fingerprint()
    if G.n == 0:
        return OracleResult(0, Immersion.empty(host))
    cap = _default_cap(G) if cap_order is None else min(cap_order, G.n)
    search = _PathSystemSearch(G, budget)
    try:
        for t in range(cap, 1, -1):
            candidates = [v for v in range(G.n) if G.degree(v) >= t - 1]
            for subset in combinations(candidates, t):
                paths = search.solve(subset)
                if paths is not None:
                    imm = Immersion(branch=subset, paths=paths, host_id=host)
                    return OracleResult(t, imm, True, search.nodes)
    except BudgetExceeded:
        logger.warning(f"Oráculo sem orçamento após {search.nodes} nós; retornando cota inferior")
        fallback = greedy_baseline(G)
        return OracleResult(fallback.order, fallback, False, search.nodes)
    return OracleResult(1, Immersion(branch=(0,), paths={}, host_id=host), True, search.nodes)
