"""Reproducible JSON and CSV documents with a metadata header.

JSON documents are objects whose first key is ``"meta"``.  CSV documents
start with ``# key: <json value>`` comment lines, then a header row, then
data.  Reading a document and writing it back gives the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys

from . import __version__
from ._jit import backend_name

__all__ = ["PRECISION_ENV", "default_precision", "metadata", "dump_json", "load_json",
           "dump_csv", "load_csv", "write_text"]

PRECISION_ENV = "SLOWBOND_PRECISION"
FALLBACK_PRECISION = 256


def default_precision() -> int:
    """Working precision in bits, from SLOWBOND_PRECISION when set."""
    raw = os.environ.get(PRECISION_ENV, "").strip()
    if not raw:
        return FALLBACK_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV}={raw!r} is not an integer") from None
    if bits < 53:
        raise ValueError(f"{PRECISION_ENV} must be at least 53 bits")
    return bits


def metadata(command: str, precision_bits: int | None = None, seed: int | None = None, **extra) -> dict:
    meta = {"program": "slowbond", "version": __version__, "command": command, "backend": backend_name()}
    if precision_bits is not None:
        meta["precision_bits"] = precision_bits
    if seed is not None:
        meta["seed"] = seed
    meta.update(extra)
    return meta


def dump_json(meta: dict, body: dict) -> str:
    doc = {"meta": meta}
    doc.update(body)
    return json.dumps(doc, indent=2) + "\n"


def load_json(text: str) -> tuple[dict, dict]:
    doc = json.loads(text)
    meta = doc.pop("meta", {})
    return meta, doc


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_csv(meta: dict, columns, rows) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {json.dumps(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def load_csv(text: str) -> tuple[dict, list, list]:
    """(meta, columns, rows); cells come back as strings."""
    meta = {}
    lines = text.splitlines(keepends=True)
    i = 0
    while i < len(lines) and lines[i].startswith("# "):
        key, _, val = lines[i][2:].rstrip("\n").partition(": ")
        meta[key] = json.loads(val)
        i += 1
    reader = csv.reader(lines[i:])
    columns = next(reader, [])
    return meta, columns, [row for row in reader]


def write_text(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
