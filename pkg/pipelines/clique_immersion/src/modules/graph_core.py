# -*- coding: utf-8 -*-
"""
Núcleo de grafos: representação imutável e primitivas de vizinhança.

Todas as rotinas de roteamento do pipeline passam por aqui. As buscas em
largura exploram vizinhos em ordem crescente de id, o que torna cada
resultado determinístico para uma entrada fixa.
"""
from __future__ import annotations

import hashlib
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Optional

from ..errors import GraphFormatError

logger = logging.getLogger(__name__)

__all__ = [
    "Edge",
    "canon",
    "Graph",
    "AvoidSet",
    "IdMap",
    "as_fraction",
    "avg_degree",
    "external_neighborhood",
    "bfs_layers",
    "ball",
    "depths_from_parents",
    "set_distance",
    "restrict",
    "induced_subgraph",
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
    "write_edge_list",
]

Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    """Forma canônica (menor, maior) de uma aresta."""
    if u == v:
        raise GraphFormatError(f"laço em {u} não é aresta de grafo simples")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Grafo simples não direcionado, imutável.

    Vértices são 0..n-1; `adjacency[v]` é a tupla ordenada de vizinhos.
    Use `Graph.from_edges` para construir com validação.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    m: int
    _edge_set: frozenset = field(default=frozenset(), repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphFormatError(f"número de vértices negativo: {n}")
        seen: set[Edge] = set()
        buckets: list[list[int]] = [[] for _ in range(n)]
        for raw_u, raw_v in edges:
            u, v = int(raw_u), int(raw_v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"aresta ({u},{v}) fora do intervalo 0..{n - 1}")
            e = canon(u, v)
            if e in seen:
                raise GraphFormatError(f"aresta paralela {e[0]}-{e[1]}")
            seen.add(e)
            buckets[u].append(v)
            buckets[v].append(u)
        adjacency = tuple(tuple(sorted(b)) for b in buckets)
        return cls(n=n, adjacency=adjacency, m=len(seen), _edge_set=frozenset(seen))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls.from_edges(n, [])

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise GraphFormatError(f"adjacência com {len(self.adjacency)} listas para n={self.n}")
        if sum(len(a) for a in self.adjacency) != 2 * self.m:
            raise GraphFormatError("m difere da metade da soma dos graus")
        if not self._edge_set and self.m:
            # construção direta: deriva o conjunto de arestas da adjacência
            arcs = {(u, v) for u in range(self.n) for v in self.adjacency[u]}
            if len(arcs) != 2 * self.m or any((v, u) not in arcs for u, v in arcs):
                raise GraphFormatError("adjacência assimétrica ou com arestas repetidas")
            object.__setattr__(self, "_edge_set", frozenset(canon(u, v) for u, v in arcs))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return canon(u, v) in self._edge_set

    def edges(self) -> Iterator[Edge]:
        """Arestas canônicas em ordem lexicográfica."""
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset:
        return self._edge_set

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vértice {v} fora do intervalo 0..{self.n - 1}")

    def fingerprint(self) -> str:
        """sha256 da lista canônica de arestas (id do hospedeiro nos certificados)."""
        digest = hashlib.sha256(f"{self.n} {self.m}\n".encode())
        for u, v in self.edges():
            digest.update(f"{u} {v}\n".encode())
        return digest.hexdigest()[:16]


@dataclass
class AvoidSet:
    """
    Máscara de roteamento: vértices proibidos, arestas proibidas e vértices
    que podem ser interiores mas não extremidades de caminho.
    """

    vertices: set[int] = field(default_factory=set)
    edges: set[Edge] = field(default_factory=set)
    forbidden_endpoints: set[int] = field(default_factory=set)

    def copy(self) -> "AvoidSet":
        return AvoidSet(set(self.vertices), set(self.edges), set(self.forbidden_endpoints))

    def blocks_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edges

    def check_range(self, G: Graph) -> None:
        for v in self.vertices | self.forbidden_endpoints:
            G.check_vertex(v)
        for u, v in self.edges:
            G.check_vertex(u)
            G.check_vertex(v)


@dataclass(frozen=True)
class IdMap:
    """Tradução de ids entre um subgrafo e o grafo hospedeiro."""

    to_host: tuple[int, ...]
    to_sub: dict = field(compare=False)

    @classmethod
    def from_host_ids(cls, host_ids: Iterable[int]) -> "IdMap":
        host = tuple(host_ids)
        return cls(to_host=host, to_sub={h: i for i, h in enumerate(host)})

    @classmethod
    def identity(cls, n: int) -> "IdMap":
        return cls.from_host_ids(range(n))

    def compose(self, inner: "IdMap") -> "IdMap":
        """`inner` traduz de um subgrafo deste subgrafo; o resultado aponta direto ao hospedeiro."""
        return IdMap.from_host_ids(self.to_host[i] for i in inner.to_host)

    def lift(self, vertices: Iterable[int]) -> set[int]:
        return {self.to_host[v] for v in vertices}

    def lower(self, vertices: Iterable[int]) -> set[int]:
        return {self.to_sub[v] for v in vertices if v in self.to_sub}


def as_fraction(x) -> Fraction:
    """Racional exato do valor decimal digitado (0.1 vira 1/10, não a aproximação binária)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(repr(float(x)))


def avg_degree(G: Graph) -> Fraction:
    """Grau médio exato 2m/n."""
    if G.n == 0:
        raise ValueError("grau médio indefinido para grafo vazio (n = 0)")
    return Fraction(2 * G.m, G.n)


def _usable(avoid: Optional[AvoidSet]) -> tuple[set[int], set[Edge]]:
    if avoid is None:
        return set(), set()
    return avoid.vertices, avoid.edges


def external_neighborhood(G: Graph, X: Iterable[int], avoid: Optional[AvoidSet] = None) -> set[int]:
    """N_{(G\\F)-Y}(X): vizinhos fora de X alcançados por arestas permitidas."""
    xs = set(X)
    for v in xs:
        G.check_vertex(v)
    banned_v, banned_e = _usable(avoid)
    out: set[int] = set()
    for v in xs:
        for u in G.adjacency[v]:
            if u in xs or u in banned_v or u in out:
                continue
            if banned_e and canon(u, v) in banned_e:
                continue
            out.add(u)
    return out


def bfs_layers(
    G: Graph,
    sources: Iterable[int],
    avoid: Optional[AvoidSet] = None,
    radius: Optional[int] = None,
    allowed: Optional[set[int]] = None,
) -> tuple[dict[int, int], dict[int, Optional[int]]]:
    """
    BFS multi-fonte em (G\\F)-Y, opcionalmente restrita a `allowed`.

    Retorna (distância, pai). Fontes são visitadas em ordem crescente e
    vizinhos em ordem crescente de id.
    """
    banned_v, banned_e = _usable(avoid)
    dist: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    queue: deque[int] = deque()
    for s in sorted(set(sources)):
        dist[s] = 0
        parent[s] = None
        queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if radius is not None and du >= radius:
            continue
        for w in G.adjacency[u]:
            if w in dist or w in banned_v:
                continue
            if allowed is not None and w not in allowed:
                continue
            if banned_e and canon(u, w) in banned_e:
                continue
            dist[w] = du + 1
            parent[w] = u
            queue.append(w)
    return dist, parent


def ball(
    G: Graph, X: Iterable[int], radius: int, avoid: Optional[AvoidSet] = None
) -> tuple[set[int], dict[int, Optional[int]]]:
    """B^r(X) em (G\\F)-Y com o mapa de pais da BFS."""
    if radius < 0:
        raise ValueError(f"raio negativo: {radius}")
    xs = set(X)
    for v in xs:
        G.check_vertex(v)
    if avoid is not None and xs & avoid.vertices:
        raise ValueError("X intersecta os vértices proibidos")
    dist, parent = bfs_layers(G, xs, avoid, radius)
    return set(dist), parent


def depths_from_parents(parents: dict[int, Optional[int]]) -> dict[int, int]:
    """Profundidade de cada vértice na floresta BFS (esferas N^i = vértices de profundidade i)."""
    depth: dict[int, int] = {}
    for v in parents:
        chain = []
        while v not in depth and parents[v] is not None:
            chain.append(v)
            v = parents[v]
        depth.setdefault(v, 0)
        level = depth[v]
        for w in reversed(chain):
            level += 1
            depth[w] = level
    return depth


def set_distance(G: Graph, A: Iterable[int], B: Iterable[int], avoid: Optional[AvoidSet] = None) -> float:
    """Distância entre conjuntos; `math.inf` quando desconexos."""
    sa, sb = set(A), set(B)
    if not sa or not sb:
        raise ValueError("conjuntos de distância não podem ser vazios")
    for v in sa | sb:
        G.check_vertex(v)
    if sa & sb:
        return 0
    banned_v, banned_e = _usable(avoid)
    dist = {s: 0 for s in sa}
    queue = deque(sorted(sa))
    while queue:
        u = queue.popleft()
        for w in G.adjacency[u]:
            if w in dist or w in banned_v:
                continue
            if banned_e and canon(u, w) in banned_e:
                continue
            if w in sb:
                return dist[u] + 1
            dist[w] = dist[u] + 1
            queue.append(w)
    return math.inf


def restrict(G: Graph, remove_vertices: Iterable[int] = (), remove_edges: Iterable[Edge] = ()) -> tuple[Graph, IdMap]:
    """
    (G\\F)-Y renumerado; ids desconhecidos são ignorados.

    Returns:
        (subgrafo, IdMap) com `to_host[novo] = antigo`.
    """
    drop_v = {v for v in remove_vertices if 0 <= v < G.n}
    drop_e = {canon(u, v) for u, v in remove_edges if u != v}
    ids = IdMap.from_host_ids(v for v in range(G.n) if v not in drop_v)
    new_edges = [
        (ids.to_sub[u], ids.to_sub[v])
        for u, v in G.edges()
        if u not in drop_v and v not in drop_v and (u, v) not in drop_e
    ]
    return Graph.from_edges(len(ids.to_host), new_edges), ids


def induced_subgraph(G: Graph, keep: Iterable[int]) -> tuple[Graph, IdMap]:
    keep_set = set(keep)
    return restrict(G, (v for v in range(G.n) if v not in keep_set))


# ==============================================================================
#      FORMATO DE LISTA DE ARESTAS
# ==============================================================================

def parse_edge_list(text: str) -> Graph:
    """
    Lê o formato "n m" seguido de m linhas "u v"; linhas com '#' são ignoradas.

    Raises:
        GraphFormatError: cabeçalho ausente, contagem divergente, laços ou duplicatas.
    """
    rows: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"linha {lineno}: esperado dois inteiros, recebido '{line}'")
        rows.append(parts)
    if not rows:
        raise GraphFormatError("cabeçalho 'n m' ausente")
    try:
        ints = [(int(a), int(b)) for a, b in rows]
    except ValueError as exc:
        raise GraphFormatError(f"valor não inteiro: {exc}") from exc
    (n, m), body = ints[0], ints[1:]
    if len(body) != m:
        raise GraphFormatError(f"cabeçalho declara {m} arestas, arquivo tem {len(body)}")
    return Graph.from_edges(n, body)


def read_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    G = parse_edge_list(path.read_text(encoding="utf-8"))
    logger.info(f"Grafo carregado de {path.name}: n={G.n}, m={G.m}")
    return G


def format_edge_list(G: Graph, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(G: Graph, path: str | Path, header: Iterable[str] = ()) -> Path:
    path = Path(path)
    path.write_text(format_edge_list(G, header), encoding="utf-8")
    return path
