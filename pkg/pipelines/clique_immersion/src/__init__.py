# -*- coding: utf-8 -*-
"""
Pipeline de Imersões de Cliques

Extração de expansores sublineares robustos, embutimento de imersões de
cliques (regimes denso e esparso), verificação de certificados e benchmarks.

Exemplo de uso:
    >>> from pipelines.clique_immersion.src import EmbedConfig, embed_clique_immersion
    >>> from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, generate
    >>> G = generate(GenSpec(GenKind.CYCLE, {"n": 5}))
    >>> imm, report = embed_clique_immersion(G, EmbedConfig())
    >>> imm.order
    3
"""

__version__ = "1.0.0"
__author__ = "Data Processing Team"

from .config import EmbedConfig, configurar_pandas
from .workbench import EmbedReport, embed_clique_immersion, run_benchmark, write_benchmark

__all__ = [
    "EmbedConfig",
    "configurar_pandas",
    "EmbedReport",
    "embed_clique_immersion",
    "run_benchmark",
    "write_benchmark",
]
