# -*- coding: utf-8 -*-
"""
Detecção de K_{s,t} e contabilidade de densidade para grafos K_{s,t}-livres.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from joblib import Parallel, delayed

from .graph_core import Graph, as_fraction, avg_degree, restrict

logger = logging.getLogger(__name__)

__all__ = [
    "KstWitness",
    "find_kst",
    "KstDensityReport",
    "kst_density_report",
    "density_after_deletion",
    "density_drop_ok",
]


@dataclass(frozen=True)
class KstWitness:
    left: tuple[int, ...]
    right: tuple[int, ...]

    def to_line(self) -> str:
        return f"KST left={' '.join(map(str, self.left))} right={' '.join(map(str, self.right))}"


def _search_block(G: Graph, s: int, t: int, first: int, eligible: list[int]) -> Optional[KstWitness]:
    """Procura s-conjuntos cujo menor vértice é `first`."""
    pos = eligible.index(first)

    def extend(chosen: list[int], common: set[int], start: int) -> Optional[KstWitness]:
        if len(common) < t:
            return None
        if len(chosen) == s:
            return KstWitness(tuple(chosen), tuple(sorted(common)[:t]))
        for idx in range(start, len(eligible)):
            v = eligible[idx]
            found = extend(chosen + [v], common & set(G.adjacency[v]), idx + 1)
            if found is not None:
                return found
        return None

    return extend([first], set(G.adjacency[first]), pos + 1)


def find_kst(G: Graph, s: int, t: int, workers: int = 1) -> Optional[KstWitness]:
    """
    Busca exata de K_{s,t}: enumera s-conjuntos de vértices com grau >= t e
    intersecta vizinhanças. O lado esquerdo da testemunha tem s vértices.

    Raises:
        ValueError: se não valer 2 <= s <= t (não há troca silenciosa).
    """
    if s > t:
        raise ValueError(f"s={s} > t={t}: informe os lados na ordem s <= t")
    if s < 2:
        raise ValueError(f"s={s} < 2 não é suportado")
    eligible = [v for v in range(G.n) if G.degree(v) >= t]
    firsts = eligible[: max(0, len(eligible) - s + 1)]
    if workers > 1 and len(firsts) > 1:
        results = Parallel(n_jobs=workers)(delayed(_search_block)(G, s, t, v, eligible) for v in firsts)
    else:
        results = []
        for v in firsts:
            found = _search_block(G, s, t, v, eligible)
            if found is not None:
                results.append(found)
                break
    for found in results:
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class KstDensityReport:
    s: int
    t: int
    n: int
    edges: int
    ratio: float
    bipartite_ratio: Optional[float]
    ksT_bound_exponent_ok: bool

    def to_lines(self) -> list[str]:
        lines = [
            f"s={self.s}",
            f"t={self.t}",
            f"n={self.n}",
            f"edges={self.edges}",
            f"ratio={self.ratio:.6f}",
            f"ksT_bound_exponent_ok={self.ksT_bound_exponent_ok}",
        ]
        if self.bipartite_ratio is not None:
            lines.append(f"bipartite_ratio={self.bipartite_ratio:.6f}")
        return lines


def kst_density_report(
    G: Graph, s: int, t: int, bipartition: Optional[tuple[Iterable[int], Iterable[int]]] = None
) -> KstDensityReport:
    """
    Razões de densidade e/n^(2-1/s) e, com bipartição, e(V1,V2)/(n1^(1-1/s) n2).

    `ksT_bound_exponent_ok` compara e(G) com a forma explícita clássica
    ½(t-1)^(1/s) n^(2-1/s) + ½(s-1)n.
    """
    n, e = G.n, G.m
    ratio = e / n ** (2 - 1 / s) if n else 0.0
    bound = 0.5 * (t - 1) ** (1 / s) * n ** (2 - 1 / s) + 0.5 * (s - 1) * n
    bip_ratio = None
    if bipartition is not None:
        left, right = set(bipartition[0]), set(bipartition[1])
        cross = sum(1 for u, v in G.edges() if (u in left and v in right) or (u in right and v in left))
        denom = len(left) ** (1 - 1 / s) * len(right)
        bip_ratio = cross / denom if denom else 0.0
    return KstDensityReport(s, t, n, e, ratio, bip_ratio, e <= bound)


def density_after_deletion(G: Graph, Z: Iterable[int]) -> Fraction:
    """d(G - Z) exato."""
    zs = {v for v in Z}
    for v in zs:
        G.check_vertex(v)
    if len(zs) >= G.n:
        raise ValueError("Z não pode cobrir todos os vértices")
    sub, _ = restrict(G, zs)
    return avg_degree(sub)


def density_drop_ok(G: Graph, Z: Iterable[int], eta: float) -> bool:
    """Predicado d(G - Z) >= d(G) - eta*d(G), avaliado em aritmética racional."""
    d = avg_degree(G)
    return density_after_deletion(G, Z) >= d - as_fraction(eta) * d
