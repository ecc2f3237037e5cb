# -*- coding: utf-8 -*-
"""
Configurações gerais do pipeline de imersões: opções do pandas e o modelo
validado de parâmetros de embutimento.
"""
from __future__ import annotations

import math
import time
from typing import Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .. import config_immersion as cfg
from .errors import ParameterError
from .modules.dense_embedder import DenseParams
from .modules.graph_core import Graph, avg_degree
from .modules.sparse_embedder import SparseParams

# ==============================================================================
#      CONFIGURAÇÕES DO PANDAS E NUMPY
# ==============================================================================

def configurar_pandas():
    """Configura as opções de exibição do pandas para as tabelas de benchmark."""
    pd.set_option('display.max_rows', 200)
    pd.set_option('display.max_columns', None)
    pd.set_option('display.width', 160)
    pd.set_option('display.float_format', lambda x: '%.4f' % x)
    np.set_printoptions(suppress=True, precision=4)


# ==============================================================================
#      MODELO DE CONFIGURAÇÃO
# ==============================================================================

class EmbedConfig(BaseModel):
    """Parâmetros de um embutimento; o modo teórico impõe os tetos de eps1, eps2 e o piso de eta."""

    eps1: float = cfg.EPS1_PADRAO
    eps2: float = cfg.EPS2_PADRAO
    eta: float = cfg.ETA_PADRAO
    s: int = cfg.S_PADRAO
    t: int = cfg.T_PADRAO
    mode: Literal["paper", "practical"] = cfg.MODO_PADRAO
    seed: int = cfg.SEMENTE_PADRAO
    time_budget_secs: Optional[float] = cfg.TEMPO_LIMITE_SEGUNDOS
    try_all_routes: bool = cfg.TENTAR_TODAS_ROTAS
    density_gate: Optional[float] = None
    epsilon: Optional[float] = None
    dense_overrides: dict[str, int] = Field(default_factory=dict)
    sparse_overrides: dict[str, float] = Field(default_factory=dict)

    @field_validator("eps1", "eps2", "eta")
    @classmethod
    def _positivo(cls, value: float) -> float:
        if not value > 0:
            raise ParameterError(f"parâmetro deve ser positivo (recebido {value})")
        return value

    @field_validator("s", "t")
    @classmethod
    def _lado(cls, value: int) -> int:
        if value < 1:
            raise ParameterError(f"lados de K_(s,t) devem ser >= 1 (recebido {value})")
        return value

    @model_validator(mode="after")
    def _hipoteses_do_modo(self) -> "EmbedConfig":
        if self.s > self.t:
            raise ParameterError(f"s={self.s} > t={self.t}")
        if self.mode == "paper":
            if self.eps1 > cfg.EPS1_MAX_TEORICO:
                raise ParameterError(f"modo teórico exige eps1 <= 1/400 (recebido {self.eps1})")
            if self.eps2 >= cfg.EPS2_MAX_TEORICO:
                raise ParameterError(f"modo teórico exige eps2 < 1/2 (recebido {self.eps2})")
            piso = max(cfg.CONSTANTE_EXTRACAO * self.eps1 / cfg.LOG3, 5 * self.eps2)
            # tolerância de arredondamento para a fiação por epsilon
            if self.eta < piso * (1 - 1e-12):
                raise ParameterError(f"modo teórico exige eta >= {piso:.6f} (recebido {self.eta})")
        return self

    @classmethod
    def create(cls, **kwargs) -> "EmbedConfig":
        """Como o construtor, mas converte falhas de validação em ParameterError."""
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ParameterError(str(exc)) from exc

    @classmethod
    def from_epsilon(cls, eps: float, **kwargs) -> "EmbedConfig":
        """eta = eps/10, eps1 = eps*log3/500 (C = 40), eps2 = eps/51."""
        if not 0 < eps <= 1:
            raise ParameterError(f"epsilon deve estar em (0, 1] (recebido {eps})")
        kwargs.setdefault("mode", "paper")
        return cls.create(
            eps1=eps * cfg.LOG3 / 500,
            eps2=eps / 51,
            eta=eps / 10,
            epsilon=eps,
            **kwargs,
        )

    # ------------------------------------------------------------------
    # Derivações dependentes do grafo
    # ------------------------------------------------------------------

    def gate_value(self, G: Graph) -> float:
        """Portão denso/esparso: sqrt(n) no modo prático, log^(200s) n no modo teórico."""
        if self.density_gate is not None:
            return self.density_gate
        if self.mode == "practical":
            return math.sqrt(G.n)
        return math.log(max(G.n, 2)) ** (200 * self.s)

    def target_order(self, G: Graph) -> int:
        if G.n == 0:
            return 0
        return max(0, math.floor((1 - 9 * self.eta) * float(avg_degree(G))))

    def dense_params(self, G: Graph) -> DenseParams:
        if self.mode == "paper":
            return DenseParams.theoretical(G, self.eps1, self.eps2, self.eta)
        return DenseParams.practical_scale(G, self.eps1, self.eps2, self.eta, **self.dense_overrides)

    def sparse_params(self, G: Graph, deadline: Optional[float] = None) -> SparseParams:
        extra = dict(seed=self.seed, try_all_routes=self.try_all_routes, deadline=deadline)
        if self.mode == "paper":
            return SparseParams.theoretical(G, self.eps1, self.eps2, self.eta, self.s, self.t, **extra)
        overrides = {k: (int(v) if k != "z1_threshold" else float(v)) for k, v in self.sparse_overrides.items()}
        return SparseParams.practical_scale(G, self.eps1, self.eps2, self.eta, self.s, self.t, **extra, **overrides)

    def deadline(self) -> Optional[float]:
        if self.time_budget_secs is None:
            return None
        return time.monotonic() + self.time_budget_secs

    def header_lines(self) -> list[str]:
        lines = [
            f"mode={self.mode}",
            f"eps1={self.eps1:.6g}",
            f"eps2={self.eps2:.6g}",
            f"eta={self.eta:.6g}",
            f"s={self.s}",
            f"t={self.t}",
            f"seed={self.seed}",
        ]
        if self.epsilon is not None:
            lines.append(f"epsilon={self.epsilon:.6g}")
        return lines
