"""Deterministic CSV/JSON output with provenance headers, written atomically."""
from __future__ import annotations

import hashlib
import io
import json
import os
import tempfile
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import jsonschema

from lieflow import __version__

CSV_SCHEMA_VERSION = "1"
OUTPUT_ENV = "LIEFLOW_OUTPUT_DIR"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()[:16]


def fmt(v) -> str:
    """Stable text for a CSV cell: floats via repr (shortest round-trip), complex as re/im elsewhere."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], header: dict[str, Any]) -> str:
    buf = io.StringIO()
    buf.write(f"# tool: lieflow {__version__}\n")
    buf.write(f"# csv_schema: {CSV_SCHEMA_VERSION}\n")
    for k in sorted(header):
        buf.write(f"# {k}: {header[k]}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path, obj) -> Path:
    return atomic_write(path, json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n")


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "lieflow-out"))


def load_schema(name: str) -> dict:
    text = resources.files("lieflow").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj: dict, name: str) -> None:
    jsonschema.validate(obj, load_schema(name))
