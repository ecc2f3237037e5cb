# -*- coding: utf-8 -*-
"""
Orquestração do pipeline: baseline guloso, extração do expansor, despacho
denso/esparso e benchmarks sobre corpora fixos.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import pandas as pd
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from .. import config_immersion as cfg
from .config import EmbedConfig
from .errors import LedgerInvariantError
from .modules.dense_embedder import assemble_from_units, find_units
from .modules.expansion import extract_robust_expander
from .modules.extremal import find_kst
from .modules.generators import GenSpec, corpus, generate
from .modules.graph_core import Graph, avg_degree
from .modules.immersion import Immersion, greedy_baseline, oracle_max_immersion, verify_immersion
from .modules.sparse_embedder import embed_sparse

logger = logging.getLogger(__name__)

__all__ = ["EmbedReport", "embed_clique_immersion", "run_benchmark", "write_benchmark", "BENCH_COLUMNS"]

BENCH_COLUMNS = [
    "spec", "n", "m", "d", "kst_free", "z1_size", "route", "achieved",
    "target", "achieved_over_d", "oracle", "density_retained_ok",
]


@dataclass
class EmbedReport:
    n: int = 0
    m: int = 0
    d: Fraction = Fraction(0)
    route: str = "baseline"
    achieved: int = 0
    target: int = 0
    case: str = "none"
    gate: float = 0.0
    expander_n: int = 0
    expander_d: Fraction = Fraction(0)
    expander_status: str = ""
    expander_complete: bool = True
    z1_size: Optional[int] = None
    density_retained_ok: Optional[bool] = None
    strong: bool = False
    candidates: dict[str, int] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    certificate_path: Optional[str] = None

    @property
    def achieved_over_d(self) -> float:
        return self.achieved / float(self.d) if self.d else math.nan

    def to_lines(self, timing: bool = False) -> list[str]:
        lines = [
            f"n={self.n}",
            f"m={self.m}",
            f"d={float(self.d):.6f}",
            f"case={self.case}",
            f"gate={self.gate:.6f}",
            f"expander_n={self.expander_n}",
            f"expander_d={float(self.expander_d):.6f}",
            f"expander_status={self.expander_status}",
            f"expander_complete={self.expander_complete}",
            f"route={self.route}",
            f"achieved={self.achieved}",
            f"target={self.target}",
            f"achieved_over_d={self.achieved_over_d:.6f}",
            f"strong={self.strong}",
        ]
        lines += [f"candidate {name}={order}" for name, order in self.candidates.items()]
        if self.z1_size is not None:
            lines.append(f"z1_size={self.z1_size}")
        if self.density_retained_ok is not None:
            lines.append(f"density_retained_ok={self.density_retained_ok}")
        lines += self.diagnostics
        if timing:
            lines.append(f"runtime={self.elapsed:.3f}")
        if self.certificate_path:
            lines.append(f"certificate={self.certificate_path}")
        return lines


def embed_clique_immersion(G: Graph, config: Optional[EmbedConfig] = None) -> tuple[Immersion, EmbedReport]:
    """
    Pipeline completo; devolve a imersão verificada de maior ordem.

    Candidatos, nesta ordem: baseline guloso, rota densa e rota esparsa
    (ambas dentro do expansor extraído). Empates ficam com o candidato
    anterior, então o resultado nunca é pior que o baseline.
    """
    config = config or EmbedConfig()
    start = time.perf_counter()
    host = G.fingerprint()
    report = EmbedReport(n=G.n, m=G.m, d=avg_degree(G) if G.n else Fraction(0))
    report.diagnostics.extend(config.header_lines())
    if G.n == 0:
        report.route = "empty"
        return Immersion.empty(host), report

    candidates: list[tuple[str, Immersion]] = [("baseline", greedy_baseline(G))]
    if G.m:
        deadline = config.deadline()
        extraction = extract_robust_expander(
            G,
            config.eps1,
            config.eps2,
            cfg.RODADAS_EXTRACAO,
            exhaustive_limit=cfg.LIMITE_EXAUSTIVO,
            seed=config.seed,
            workers=cfg.MAX_CERTIFY_WORKERS,
        )
        H, ids = extraction.graph, extraction.ids
        dH = avg_degree(H)
        report.expander_n = H.n
        report.expander_d = dH
        report.expander_status = extraction.verdict.status.value
        report.expander_complete = extraction.complete
        report.gate = config.gate_value(H)
        report.case = "dense" if dH >= report.gate else "sparse"
        report.target = config.target_order(H)
        report.diagnostics.append(f"extraction_density_ok={extraction.density_ok}")
        report.diagnostics.append(f"extraction_min_degree_ok={extraction.min_degree_ok}")
        logger.info(f"Expansor: n={H.n}, d={float(dH):.3f}, caso {report.case} (portão {report.gate:.3f})")

        if report.case == "dense" or config.try_all_routes:
            dp = config.dense_params(H)
            report.diagnostics.append(
                f"ell={dp.ell} ell_prime={dp.ell_prime} ell_double_prime={dp.ell_double_prime} "
                f"m={dp.m} ordering_ok={dp.ordering_ok()}"
            )
            search = find_units(H, dp)
            dense_imm, dense_report = assemble_from_units(H, search.units, dp)
            report.diagnostics.extend(d.to_line() for d in search.deficits)
            report.diagnostics.extend(dense_report.to_lines())
            candidates.append(("dense", dense_imm.lift(ids, host)))

        if report.case == "sparse" or config.try_all_routes:
            outcome = embed_sparse(H, config.sparse_params(H, deadline))
            report.z1_size = outcome.z1_size
            report.density_retained_ok = outcome.density_retained_ok
            report.diagnostics.extend(outcome.lines)
            candidates.append((f"sparse:{outcome.route}", outcome.immersion.lift(ids, host)))

    best_name, best = candidates[0]
    for name, imm in candidates:
        verdict = verify_immersion(G, imm)
        if not verdict.ok:
            raise LedgerInvariantError(f"candidato {name} falhou na verificação: {verdict.first.to_line()}")
        report.candidates[name] = imm.order
        if imm.order > best.order:
            best_name, best = name, imm

    report.route = best_name
    report.achieved = best.order
    report.strong = verify_immersion(G, best, strong=True).ok
    report.elapsed = time.perf_counter() - start
    logger.info(f"Imersão de ordem {best.order} via {best_name}")
    return best, report


# ==============================================================================
#      BENCHMARK
# ==============================================================================

def _benchmark_row(index: int, spec: GenSpec, config: EmbedConfig, timing: bool) -> dict:
    G = generate(spec)
    d = float(avg_degree(G)) if G.n else 0.0
    kst_free = find_kst(G, config.s, config.t) is None if config.s >= 2 else None
    _, report = embed_clique_immersion(G, config)
    oracle = None
    if G.n <= cfg.ORACULO_MAX_N:
        oracle = oracle_max_immersion(G).max_order
    row = {
        "index": index,
        "spec": spec.label(),
        "n": G.n,
        "m": G.m,
        "d": d,
        "kst_free": kst_free,
        "z1_size": report.z1_size,
        "route": report.route,
        "achieved": report.achieved,
        "target": report.target,
        "achieved_over_d": report.achieved / d if d else math.nan,
        "oracle": oracle,
        "density_retained_ok": report.density_retained_ok,
    }
    if timing:
        row["runtime"] = report.elapsed
    return row


def run_benchmark(
    profile: str,
    config: Optional[EmbedConfig] = None,
    workers: int = 1,
    timing: bool = False,
) -> pd.DataFrame:
    """
    Uma linha por grafo do corpus; linhas ordenadas pela posição no corpus,
    então o número de workers não altera a tabela.
    """
    config = config or EmbedConfig()
    specs = corpus(profile, config.seed)
    workers = max(1, min(workers, cfg.MAX_BENCH_WORKERS))
    logger.info(f"Benchmark '{profile}': {len(specs)} grafos, {workers} worker(s)")
    jobs = (delayed(_benchmark_row)(idx, spec, config, timing) for idx, spec in enumerate(specs))
    rows = Parallel(n_jobs=workers)(tqdm(jobs, total=len(specs), desc=f"Benchmark {profile}", ncols=100))
    df = pd.DataFrame(sorted(rows, key=lambda row: row["index"])).drop(columns=["index"])
    for col in ("z1_size", "oracle"):
        df[col] = df[col].astype("Int64")
    for col in ("kst_free", "density_retained_ok"):
        df[col] = df[col].astype("boolean")
    columns = BENCH_COLUMNS + (["runtime"] if timing else [])
    return df[columns]


def write_benchmark(df: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, sep="\t", index=False, float_format="%.6f", na_rep="", lineterminator="\n")
    logger.info(f"Tabela salva em {path}")
    return path
