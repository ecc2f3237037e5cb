"""Funções utilitárias compartilhadas."""
from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path


def ensure_dir(path: str | Path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_text(path: str | Path, text: str) -> Path:
    """Grava texto UTF-8 com quebras '\\n', criando o diretório pai."""
    path = Path(path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
