"""Deterministic output helpers: atomic writes and stable formatting.

Every file the pipeline emits goes through write-then-rename so readers
never observe a partial file, and floats are formatted at six significant
digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile


def fmt_value(value) -> str:
    """Format a cell: floats at 6 significant digits, others verbatim."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def atomic_write_bytes(path, data: bytes):
    """Write a file atomically: temp file in the same directory, then
    rename over the target."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str):
    atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path, header, rows):
    """Write a CSV atomically with formatted cells."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_value(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def write_json(path, payload):
    """Write JSON atomically with sorted keys and a trailing newline."""
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True)
                      + "\n")


def slug(name: str) -> str:
    """File-name-safe lowercase token for a category or metric name."""
    out = []
    for ch in name.lower():
        out.append(ch if ch.isalnum() else "_")
    token = "".join(out)
    while "__" in token:
        token = token.replace("__", "_")
    return token.strip("_")
