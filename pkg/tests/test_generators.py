# -*- coding: utf-8 -*-
import pytest

from pipelines.clique_immersion.src.errors import ParameterError
from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, corpus, generate, is_prime
from pipelines.clique_immersion.src.modules.graph_core import avg_degree, format_edge_list


def test_fixed_generators():
    assert generate(GenSpec(GenKind.COMPLETE, {"n": 6})).m == 15
    assert generate(GenSpec(GenKind.CYCLE, {"n": 7})).m == 7
    assert generate(GenSpec(GenKind.PATH, {"n": 1})).m == 0
    kab = generate(GenSpec(GenKind.COMPLETE_BIPARTITE, {"a": 2, "b": 3}))
    assert kab.n == 5 and kab.m == 6 and not kab.has_edge(0, 1)


def test_dumbbell_with_long_bridges():
    G = generate(GenSpec(GenKind.DUMBBELL, {"k": 5, "bridge_length": 3, "bridges": 2}))
    # 2 cliques de 5 + 2 internos por ponte
    assert G.n == 14
    assert G.m == 2 * 10 + 2 * 3


def test_random_generators_are_deterministic():
    spec = GenSpec(GenKind.GNP, {"n": 30, "p": 0.2}, seed=4)
    assert generate(spec) == generate(spec)
    assert generate(spec).fingerprint() != generate(GenSpec(GenKind.GNP, {"n": 30, "p": 0.2}, seed=5)).fingerprint()
    rr = GenSpec(GenKind.RANDOM_REGULAR, {"n": 20, "d": 3}, seed=2)
    G = generate(rr)
    assert G == generate(rr)
    assert all(G.degree(v) == 3 for v in G.vertices)


def test_header_names_the_spec():
    spec = GenSpec(GenKind.GNP, {"p": 0.5, "n": 6}, seed=9)
    assert spec.label() == "Gnp(n=6,p=0.5)"
    text = format_edge_list(generate(spec), spec.header())
    assert text.splitlines()[0] == "# gen Gnp(n=6,p=0.5) seed=9"


@pytest.mark.parametrize(
    "spec",
    [
        GenSpec(GenKind.CYCLE, {"n": 2}),
        GenSpec(GenKind.GNP, {"n": 5, "p": 1.5}),
        GenSpec(GenKind.GNP, {"n": 5}),
        GenSpec(GenKind.RANDOM_REGULAR, {"n": 5, "d": 3}),
        GenSpec(GenKind.RANDOM_REGULAR, {"n": 4, "d": 4}),
        GenSpec(GenKind.DUMBBELL, {"k": 3, "bridges": 4}),
        GenSpec(GenKind.POLARITY_ER, {"q": 4}),
    ],
)
def test_invalid_specs_raise(spec):
    with pytest.raises(ParameterError):
        generate(spec)


def test_is_prime():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_polarity_graph_shape(q):
    G = generate(GenSpec(GenKind.POLARITY_ER, {"q": q}))
    assert G.n == q * q + q + 1
    assert G.m == (q + 1) ** 2 * q // 2
    assert {G.degree(v) for v in G.vertices} == {q, q + 1}


def test_tiny_corpus_covers_oracle_range():
    specs = corpus("tiny", 1)
    labels = {s.label() for s in specs}
    assert {"Complete(n=4)", "Cycle(n=5)", "Path(n=6)"} <= labels
    graphs = [generate(s) for s in specs]
    assert all(G.n <= 7 for G in graphs)
    assert sum(1 for G in graphs if G.n <= 6) >= 40
    assert corpus("tiny", 1) == specs


def test_other_profiles_build():
    for profile in ("kstfree", "dense", "sparse"):
        for spec in corpus(profile, 0):
            G = generate(spec)
            assert G.n > 0 and avg_degree(G) > 0


def test_unknown_profile():
    with pytest.raises(ParameterError):
        corpus("huge")
