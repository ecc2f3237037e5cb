# -*- coding: utf-8 -*-
import pandas as pd
import pytest

from pipelines.clique_immersion.src.config import EmbedConfig
from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, corpus, generate
from pipelines.clique_immersion.src.modules.graph_core import Graph
from pipelines.clique_immersion.src.modules.immersion import greedy_baseline, verify_immersion
from pipelines.clique_immersion.src.workbench import (
    BENCH_COLUMNS,
    embed_clique_immersion,
    run_benchmark,
    write_benchmark,
)
from tests.conftest import complete, cycle, two_k8_bridge


def test_complete_graph_reaches_full_order():
    G = complete(30)
    imm, report = embed_clique_immersion(G)
    assert imm.order == 30 and report.achieved == 30
    assert report.case == "dense"
    assert report.route == "baseline"
    assert verify_immersion(G, imm).ok
    assert report.strong


def test_five_cycle_beats_baseline():
    G = cycle(5)
    imm, report = embed_clique_immersion(G)
    assert imm.order == 3
    assert report.case == "sparse"
    assert report.route.startswith("sparse:")
    assert report.candidates["baseline"] == 2
    assert verify_immersion(G, imm).ok
    lines = report.to_lines(timing=True)
    assert "achieved=3" in lines
    assert any(line.startswith("runtime=") for line in lines)


def test_empty_and_edgeless_graphs():
    imm, report = embed_clique_immersion(Graph.empty(0))
    assert imm.order == 0 and report.route == "empty"
    imm, report = embed_clique_immersion(Graph.empty(4))
    assert imm.order == 1 and report.route == "baseline"


def test_never_worse_than_baseline():
    config = EmbedConfig()
    for spec in corpus("tiny", 3)[::3] + [GenSpec(GenKind.DUMBBELL, {"k": 6})]:
        G = generate(spec)
        imm, report = embed_clique_immersion(G, config)
        assert imm.order >= greedy_baseline(G).order
        assert verify_immersion(G, imm).ok
        assert report.achieved == max(report.candidates.values())


def test_bridged_cliques_use_extracted_side():
    G = two_k8_bridge()
    imm, report = embed_clique_immersion(G, EmbedConfig(eps1=0.5, eps2=0.1, eta=0.5))
    assert report.expander_n == 8
    assert imm.order >= 8
    assert verify_immersion(G, imm).ok


@pytest.mark.slow
def test_tiny_benchmark_against_oracle(tmp_path):
    df = run_benchmark("tiny", EmbedConfig(), workers=1)
    assert list(df.columns) == BENCH_COLUMNS
    assert len(df) == len(corpus("tiny", 0))
    assert (df["achieved"] <= df["oracle"]).all()
    exact = df[df["spec"].str.match(r"^(Complete|Cycle)\(")]
    assert (exact["achieved"] == exact["oracle"]).all()

    path = write_benchmark(df, tmp_path / "bench.tsv")
    back = pd.read_csv(path, sep="\t")
    assert list(back.columns) == BENCH_COLUMNS
    assert len(back) == len(df)
    assert "\r" not in path.read_text(encoding="utf-8")


@pytest.mark.slow
def test_benchmark_rows_independent_of_workers():
    config = EmbedConfig(seed=1)
    serial = run_benchmark("tiny", config, workers=1)
    parallel = run_benchmark("tiny", config, workers=4)
    pd.testing.assert_frame_equal(serial, parallel)


def test_benchmark_timing_column():
    df = run_benchmark("kstfree", EmbedConfig(try_all_routes=False), workers=1, timing=True)
    assert list(df.columns) == BENCH_COLUMNS + ["runtime"]
    assert df["kst_free"].iloc[:4].all()
    assert df["oracle"].isna().all()
