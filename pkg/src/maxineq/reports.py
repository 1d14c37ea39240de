"""Deterministic report serialization.

JSON is rendered by a small built-in serializer so every float is written
with 17 significant digits and reruns are byte-identical; files are
written atomically (temp file + rename).
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "render_json", "write_json", "write_csv"]


def _render(value, pieces, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if value is None:
        pieces.append("null")
    elif isinstance(value, bool):
        pieces.append("true" if value else "false")
    elif isinstance(value, int):
        pieces.append(str(value))
    elif isinstance(value, float):
        if math.isnan(value):
            pieces.append("NaN")
        elif math.isinf(value):
            pieces.append("Infinity" if value > 0 else "-Infinity")
        else:
            pieces.append(format(value, ".17g"))
    elif isinstance(value, str):
        escaped = (
            value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        )
        pieces.append(f'"{escaped}"')
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for idx, (key, item) in enumerate(value.items()):
            pieces.append(f'{pad_in}"{key}": ')
            _render(item, pieces, indent, level + 1)
            pieces.append(",\n" if idx < len(value) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        seq = list(value)
        if not seq:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for idx, item in enumerate(seq):
            pieces.append(pad_in)
            _render(item, pieces, indent, level + 1)
            pieces.append(",\n" if idx < len(seq) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        try:
            import numpy as np

            if isinstance(value, np.integer):
                pieces.append(str(int(value)))
                return
            if isinstance(value, np.floating):
                _render(float(value), pieces, indent, level)
                return
            if isinstance(value, np.ndarray):
                _render(value.tolist(), pieces, indent, level)
                return
        except ImportError:  # pragma: no cover
            pass
        raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(obj) -> str:
    pieces = []
    _render(obj, pieces, indent=2, level=0)
    pieces.append("\n")
    return "".join(pieces)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    body = dict(obj)
    body.setdefault("schema_version", SCHEMA_VERSION)
    ordered = {"schema_version": body.pop("schema_version")}
    ordered.update(body)
    _atomic_write(Path(path), render_json(ordered))


def write_csv(path, rows) -> None:
    text = "\n".join(",".join(str(cell) for cell in row) for row in rows) + "\n"
    _atomic_write(Path(path), text)
