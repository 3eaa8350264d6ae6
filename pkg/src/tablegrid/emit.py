"""CSV and JSON serialisation of extracted table grids."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from .gridmap import TableGrid

__all__ = ["EmitConfig", "JSON_SCHEMA", "csv_name", "render_outputs", "to_csv", "to_json", "write_files"]

Format = Literal["csv", "json", "both"]

JSON_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["source", "parameters", "tables"],
    "additionalProperties": False,
    "properties": {
        "source": {"type": ["string", "null"]},
        "parameters": {"type": "object"},
        "tables": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "n_rows", "n_cols", "outline", "rows"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "n_rows": {"type": "integer", "minimum": 1},
                    "n_cols": {"type": "integer", "minimum": 1},
                    "outline": {
                        "type": ["array", "null"],
                        "items": {"type": "integer"},
                        "minItems": 4,
                        "maxItems": 4,
                    },
                    "rows": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class EmitConfig:
    output_dir: Path
    base_name: str
    format: Format = "csv"


def to_csv(grid: TableGrid) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    # the csv module cannot represent NUL; it never carries meaning in OCR text
    writer.writerows([[c.replace("\x00", "") for c in row] for row in grid.cells])
    return buf.getvalue().encode("utf-8")


def to_json(grids: list[TableGrid], provenance: dict[str, Any] | None = None) -> bytes:
    """JSON document with fixed key order; identical input gives identical bytes.

    ``provenance`` may carry ``source`` (image path) and ``parameters``.
    """
    provenance = provenance or {}
    doc = {
        "source": provenance.get("source"),
        "parameters": provenance.get("parameters", {}),
        "tables": [
            {
                "id": g.table_id,
                "n_rows": g.n_rows,
                "n_cols": g.n_cols,
                "outline": g.outline.as_list() if g.outline is not None else None,
                "rows": g.rows(),
            }
            for g in grids
        ],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def csv_name(base_name: str, table_id: int) -> str:
    return f"{base_name}_table{table_id}.csv"


def render_outputs(grids: list[TableGrid], provenance: dict[str, Any], cfg: EmitConfig) -> dict[str, bytes]:
    """File name -> content for everything ``cfg`` asks for."""
    out: dict[str, bytes] = {}
    if cfg.format in ("csv", "both"):
        for g in grids:
            out[csv_name(cfg.base_name, g.table_id)] = to_csv(g)
    if cfg.format in ("json", "both"):
        out[f"{cfg.base_name}.json"] = to_json(grids, provenance)
    return out


def write_files(output_dir: str | Path, files: dict[str, bytes]) -> list[Path]:
    """Write every file via a temporary sibling and an atomic rename."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    staged: list[tuple[str, Path]] = []
    try:
        for name, data in files.items():
            fd, tmp = tempfile.mkstemp(dir=output_dir, prefix=f".{name}.", suffix=".tmp")
            staged.append((tmp, output_dir / name))
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.chmod(tmp, 0o644)
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
    return [final for _, final in staged]
