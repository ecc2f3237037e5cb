#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Script principal para executar o benchmark padrão do pipeline de imersões.

Este script deve ser executado da raiz do projeto:
    python -m pipelines.clique_immersion.main
"""

import logging

from pipelines.clique_immersion import config_immersion as cfg
from pipelines.clique_immersion.src import EmbedConfig, configurar_pandas, run_benchmark, write_benchmark


def run(profile: str = "tiny") -> None:
    """Executa o benchmark do perfil e salva a tabela em BENCHMARK_DIR."""
    configurar_pandas()
    df = run_benchmark(profile, EmbedConfig(), workers=cfg.MAX_BENCH_WORKERS)
    path = write_benchmark(df, cfg.BENCHMARK_DIR / f"bench_{profile}.tsv")
    print(df.to_string(index=False))
    print(f"\n[OK] Tabela salva em {path}")


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
    )
    run()
