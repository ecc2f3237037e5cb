"""Camada principal da aplicação.

Este pacote fornece interfaces de alto nível (embedder, utils) para
orquestrar o pipeline definido em `pipelines/clique_immersion`.
"""
