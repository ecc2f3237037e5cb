"""Interfaces de embutimento e verificação sobre arquivos.

Camada fina sobre `pipelines.clique_immersion` para expor funções claras
à CLI e aos testes de ponta a ponta.
"""
from __future__ import annotations

from pathlib import Path
from typing import Optional

from pipelines.clique_immersion.src.config import EmbedConfig
from pipelines.clique_immersion.src.modules.graph_core import Graph, read_edge_list
from pipelines.clique_immersion.src.modules.immersion import (
    Immersion,
    VerifyReport,
    format_certificate,
    parse_certificate,
    verify_immersion,
)
from pipelines.clique_immersion.src.workbench import EmbedReport, embed_clique_immersion

from .utils import write_text


def embed_file(
    graph_path: str | Path,
    config: Optional[EmbedConfig] = None,
    certificate_path: Optional[str | Path] = None,
) -> tuple[Graph, Immersion, EmbedReport]:
    """Lê a lista de arestas, embute e opcionalmente grava o certificado."""

    G = read_edge_list(graph_path)
    imm, report = embed_clique_immersion(G, config)
    if certificate_path is not None:
        write_text(certificate_path, format_certificate(imm))
        report.certificate_path = str(certificate_path)
    return G, imm, report


def load_certificate(path: str | Path) -> Immersion:
    return parse_certificate(Path(path).read_text(encoding="utf-8"))


def verify_files(graph_path: str | Path, certificate_path: str | Path, strong: bool = False) -> VerifyReport:
    """Verificação independente: só o grafo e o certificado são lidos."""

    G = read_edge_list(graph_path)
    imm = load_certificate(certificate_path)
    return verify_immersion(G, imm, strong=strong)
