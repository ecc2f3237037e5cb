# -*- coding: utf-8 -*-
"""
Módulos do Pipeline de Imersões
"""

from . import (
    graph_core,
    expansion,
    extremal,
    immersion,
    generators,
    dense_embedder,
    sparse_embedder,
)

__all__ = [
    "graph_core",
    "expansion",
    "extremal",
    "immersion",
    "generators",
    "dense_embedder",
    "sparse_embedder",
]
