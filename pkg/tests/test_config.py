# -*- coding: utf-8 -*-
import math

import pytest
from pydantic import ValidationError

from pipelines.clique_immersion.src.config import EmbedConfig
from pipelines.clique_immersion.src.errors import ParameterError
from tests.conftest import complete


def test_defaults_are_practical():
    config = EmbedConfig()
    assert config.mode == "practical"
    assert config.eps1 == 1 / 400
    assert "mode=practical" in config.header_lines()


@pytest.mark.parametrize("eps", [0.05, 0.5, 1.0])
def test_epsilon_wiring_satisfies_theoretical_hypotheses(eps):
    config = EmbedConfig.from_epsilon(eps)
    assert config.mode == "paper"
    assert config.eta == pytest.approx(eps / 10)
    assert config.eps1 == pytest.approx(eps * math.log(3) / 500)
    assert config.eps2 == pytest.approx(eps / 51)
    assert config.eps1 <= 1 / 400
    assert f"epsilon={eps:.6g}" in config.header_lines()


@pytest.mark.parametrize("eps", [0.0, -0.1, 1.5])
def test_epsilon_out_of_range(eps):
    with pytest.raises(ParameterError):
        EmbedConfig.from_epsilon(eps)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mode="paper", eps1=0.01),
        dict(mode="paper", eps2=0.5),
        dict(mode="paper", eta=0.05),
        dict(eps1=0.0),
        dict(s=3, t=2),
        dict(s=0),
        dict(mode="fast"),
    ],
)
def test_invalid_configs(kwargs):
    with pytest.raises(ParameterError):
        EmbedConfig.create(**kwargs)


def test_constructor_raises_validation_error():
    with pytest.raises(ValidationError):
        EmbedConfig(mode="paper", eps1=0.01)


def test_practical_mode_is_permissive():
    config = EmbedConfig.create(eps1=0.01, eps2=0.2, eta=0.01)
    assert config.mode == "practical"


def test_graph_dependent_values():
    G = complete(16)
    assert EmbedConfig().gate_value(G) == 4.0
    assert EmbedConfig(density_gate=2.5).gate_value(G) == 2.5
    assert EmbedConfig.from_epsilon(0.5).gate_value(G) == pytest.approx(math.log(16) ** 400)
    assert EmbedConfig(eta=0.01).target_order(complete(10)) == 8


def test_overrides_reach_route_parameters():
    G = complete(10)
    config = EmbedConfig(dense_overrides={"h1": 3}, sparse_overrides={"kappa": 2, "z1_threshold": 5})
    assert config.dense_params(G).h1 == 3
    sparse = config.sparse_params(G)
    assert sparse.kappa == 2 and sparse.separation == 7
    assert sparse.z1_threshold == 5.0
    assert EmbedConfig(time_budget_secs=None).deadline() is None
