# -*- coding: utf-8 -*-
"""
Hierarquia de exceções do pipeline de imersões.

A CLI converte estas exceções em códigos de saída (ver `cli.py`).
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ImmersionError",
    "GraphFormatError",
    "CertificateFormatError",
    "ParameterError",
    "Deficit",
    "DeficitError",
    "BudgetExceeded",
    "LedgerInvariantError",
]


class ImmersionError(Exception):
    """Erro base do pacote."""


class GraphFormatError(ImmersionError, ValueError):
    """Lista de arestas inválida (laços, duplicatas, ids fora do intervalo)."""


class CertificateFormatError(ImmersionError, ValueError):
    """Certificado ou testemunha malformados."""


class ParameterError(ImmersionError, ValueError):
    """Parâmetros fora das hipóteses exigidas pelo modo escolhido."""


@dataclass(frozen=True)
class Deficit:
    """Registro de falta: quantos objetos de um tipo foram achados vs pedidos."""

    kind: str
    found: int
    wanted: int
    note: str = ""

    def to_line(self) -> str:
        line = f"deficit kind={self.kind} found={self.found} wanted={self.wanted}"
        if self.note:
            line += f" note={self.note}"
        return line


class DeficitError(ImmersionError):
    def __init__(self, deficit: Deficit):
        super().__init__(deficit.to_line())
        self.deficit = deficit


class BudgetExceeded(ImmersionError):
    """Orçamento de nós ou de tempo estourado; resultados são apenas cotas inferiores."""


class LedgerInvariantError(ImmersionError, AssertionError):
    """Quebra de invariante de registro (reuso de aresta, auditorias de bolas)."""
