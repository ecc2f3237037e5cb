# -*- coding: utf-8 -*-
"""
Geradores determinísticos de grafos e corpora de benchmark.

Todos os geradores aleatórios usam `numpy.random.default_rng(seed)`; a mesma
especificação produz sempre o mesmo grafo.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np

from ... import config_immersion as cfg
from ..errors import ParameterError
from .graph_core import Graph

logger = logging.getLogger(__name__)

__all__ = ["GenKind", "GenSpec", "generate", "corpus", "is_prime", "PROFILES"]


class GenKind(str, Enum):
    COMPLETE = "Complete"
    CYCLE = "Cycle"
    PATH = "Path"
    GNP = "Gnp"
    RANDOM_REGULAR = "RandomRegular"
    COMPLETE_BIPARTITE = "CompleteBipartite"
    DUMBBELL = "Dumbbell"
    POLARITY_ER = "PolarityER"


# Parâmetros obrigatórios por tipo
_REQUIRED = {
    GenKind.COMPLETE: ("n",),
    GenKind.CYCLE: ("n",),
    GenKind.PATH: ("n",),
    GenKind.GNP: ("n", "p"),
    GenKind.RANDOM_REGULAR: ("n", "d"),
    GenKind.COMPLETE_BIPARTITE: ("a", "b"),
    GenKind.DUMBBELL: ("k",),
    GenKind.POLARITY_ER: ("q",),
}


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def label(self) -> str:
        args = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.kind.value}({args})"

    def header(self) -> list[str]:
        return [f"gen {self.label()} seed={self.seed}"]

    def validate(self) -> None:
        missing = [k for k in _REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise ParameterError(f"{self.kind.value}: parâmetros ausentes {missing}")
        p = self.params
        if self.kind in (GenKind.COMPLETE, GenKind.PATH, GenKind.GNP, GenKind.RANDOM_REGULAR) and p["n"] < 0:
            raise ParameterError(f"{self.kind.value}: n negativo")
        if self.kind == GenKind.CYCLE and p["n"] < 3:
            raise ParameterError("Cycle exige n >= 3")
        if self.kind == GenKind.GNP and not 0.0 <= float(p["p"]) <= 1.0:
            raise ParameterError(f"Gnp: p={p['p']} fora de [0,1]")
        if self.kind == GenKind.RANDOM_REGULAR:
            n, d = p["n"], p["d"]
            if (n * d) % 2 or not 0 <= d < max(n, 1):
                raise ParameterError(f"RandomRegular: n*d precisa ser par e 0 <= d < n (n={n}, d={d})")
        if self.kind == GenKind.COMPLETE_BIPARTITE and (p["a"] < 0 or p["b"] < 0):
            raise ParameterError("CompleteBipartite: lados negativos")
        if self.kind == GenKind.DUMBBELL:
            if p["k"] < 2 or p.get("bridge_length", 1) < 1 or p.get("bridges", 1) < 1:
                raise ParameterError("Dumbbell exige k >= 2, bridge_length >= 1, bridges >= 1")
            if p.get("bridges", 1) > p["k"]:
                raise ParameterError("Dumbbell: mais pontes que vértices por clique")
        if self.kind == GenKind.POLARITY_ER and not is_prime(int(p["q"])):
            raise ParameterError(f"PolarityER exige q primo (recebido {p['q']})")


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _complete(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _gnp(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    draws = rng.random((n, n))
    rows, cols = np.nonzero(np.triu(draws < p, k=1))
    return list(zip(rows.tolist(), cols.tolist()))


def _random_regular(n: int, d: int, seed: int) -> list[tuple[int, int]]:
    """Modelo de configuração com reamostragem até sair simples."""
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for attempt in range(cfg.MAX_REAMOSTRAGENS_REGULAR):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        if np.any(lo == hi):
            continue
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        logger.debug(f"RandomRegular(n={n}, d={d}) simples após {attempt + 1} tentativas")
        return list(zip(lo.tolist(), hi.tolist()))
    raise RuntimeError(
        f"RandomRegular(n={n}, d={d}): nenhum grafo simples em {cfg.MAX_REAMOSTRAGENS_REGULAR} reamostragens"
    )


def _dumbbell(k: int, bridge_length: int, bridges: int) -> tuple[int, list[tuple[int, int]]]:
    edges = _complete(k) + [(u + k, v + k) for u, v in _complete(k)]
    n = 2 * k
    for b in range(bridges):
        chain = [b]
        for _ in range(bridge_length - 1):
            chain.append(n)
            n += 1
        chain.append(k + b)
        edges.extend(zip(chain, chain[1:]))
    return n, edges


def _polarity_points(q: int) -> np.ndarray:
    """Pontos normalizados do plano projetivo sobre F_q: (1,a,b), (0,1,a), (0,0,1)."""
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, a) for a in range(q)]
    pts.append((0, 0, 1))
    return np.array(pts, dtype=np.int64)


def _polarity(q: int) -> tuple[int, list[tuple[int, int]]]:
    pts = _polarity_points(q)
    orth = (pts @ pts.T) % q == 0
    rows, cols = np.nonzero(np.triu(orth, k=1))
    return len(pts), list(zip(rows.tolist(), cols.tolist()))


def generate(spec: GenSpec) -> Graph:
    """Constrói o grafo descrito por `spec` (determinístico para a mesma especificação)."""
    spec.validate()
    p = spec.params
    kind = spec.kind
    if kind == GenKind.COMPLETE:
        return Graph.from_edges(p["n"], _complete(p["n"]))
    if kind == GenKind.CYCLE:
        n = p["n"]
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == GenKind.PATH:
        n = p["n"]
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == GenKind.GNP:
        return Graph.from_edges(p["n"], _gnp(p["n"], float(p["p"]), spec.seed))
    if kind == GenKind.RANDOM_REGULAR:
        return Graph.from_edges(p["n"], _random_regular(p["n"], p["d"], spec.seed))
    if kind == GenKind.COMPLETE_BIPARTITE:
        a, b = p["a"], p["b"]
        return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])
    if kind == GenKind.DUMBBELL:
        n, edges = _dumbbell(p["k"], p.get("bridge_length", 1), p.get("bridges", 1))
        return Graph.from_edges(n, edges)
    n, edges = _polarity(int(p["q"]))
    return Graph.from_edges(n, edges)


# ==============================================================================
#      CORPORA
# ==============================================================================

def _tiny(seed: int) -> list[GenSpec]:
    specs = [GenSpec(GenKind.COMPLETE, {"n": n}) for n in range(1, 8)]
    specs += [GenSpec(GenKind.CYCLE, {"n": n}) for n in range(3, 8)]
    specs += [GenSpec(GenKind.PATH, {"n": n}) for n in range(2, 8)]
    specs += [
        GenSpec(GenKind.COMPLETE_BIPARTITE, {"a": a, "b": b})
        for a in range(1, 4)
        for b in range(a, 7 - a + 1)
    ]
    idx = 0
    for n in (4, 5, 6, 7):
        for p in (0.3, 0.5, 0.7):
            for _ in range(2):
                specs.append(GenSpec(GenKind.GNP, {"n": n, "p": p}, seed=seed * 1000 + idx))
                idx += 1
    return specs


def _kstfree(seed: int) -> list[GenSpec]:
    specs = [GenSpec(GenKind.POLARITY_ER, {"q": q}) for q in (3, 5, 7, 11)]
    specs += [GenSpec(GenKind.GNP, {"n": 60, "p": 0.05}, seed=seed * 1000 + i) for i in range(2)]
    return specs


def _dense(seed: int) -> list[GenSpec]:
    specs = [GenSpec(GenKind.COMPLETE, {"n": n}) for n in (10, 20, 30)]
    specs.append(GenSpec(GenKind.GNP, {"n": 40, "p": 0.7}, seed=seed * 1000))
    specs.append(GenSpec(GenKind.GNP, {"n": 60, "p": 0.5}, seed=seed * 1000 + 1))
    return specs


def _sparse(seed: int) -> list[GenSpec]:
    return [
        GenSpec(GenKind.RANDOM_REGULAR, {"n": 60, "d": 3}, seed=seed * 1000),
        GenSpec(GenKind.RANDOM_REGULAR, {"n": 100, "d": 4}, seed=seed * 1000 + 1),
        GenSpec(GenKind.DUMBBELL, {"k": 15, "bridge_length": 4, "bridges": 3}),
        GenSpec(GenKind.DUMBBELL, {"k": 10}),
        GenSpec(GenKind.CYCLE, {"n": 20}),
    ]


PROFILES = {
    "tiny": _tiny,
    "kstfree": _kstfree,
    "dense": _dense,
    "sparse": _sparse,
}


def corpus(profile: str, seed: int = cfg.SEMENTE_PADRAO) -> list[GenSpec]:
    """Menu fixo de especificações para um perfil; sementes derivadas de `seed`."""
    try:
        builder = PROFILES[profile]
    except KeyError:
        raise ParameterError(f"perfil desconhecido '{profile}' (opções: {sorted(PROFILES)})") from None
    return builder(seed)
