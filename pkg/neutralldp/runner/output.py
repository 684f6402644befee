"""
Result files: CSV with a ``#`` comment header, and JSON sidecars.

Files are written to a temporary sibling and moved into place with ``os.replace``, so a
reader never sees a partial file at the target path.
"""

import contextlib
import json
import os
import pathlib
import tempfile

import numpy as np

from .._errors import OutputError


def format_value(value):
    """Shortest round-trip text for floats; ``true``/``false`` for booleans; empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_csv(header, columns, rows):
    """
    :param header: ordered (key, value) pairs written as ``# key: value`` lines
    :param columns: column names
    :param rows: sequences of cell values
    """
    lines = [f"# {key}: {value}" for key, value in header]
    lines.append(",".join(columns))
    lines.extend(",".join(format_value(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def atomic_write(path, text):
    """
    Write ``text`` to ``path`` through a temporary file in the same directory.

    :raises OutputError: if the directory is missing or not writable
    """
    path = pathlib.Path(path)
    directory = path.parent if str(path.parent) else pathlib.Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as e:
        raise OutputError(f"cannot write to {directory}: {e.strerror}", path=str(path))

    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except OSError as e:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise OutputError(f"cannot write {path}: {e.strerror}", path=str(path))


def write_csv(path, header, columns, rows):
    atomic_write(path, render_csv(header, columns, rows))


def write_json(path, data):
    atomic_write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def manifest_path(output_path):
    return pathlib.Path(f"{output_path}.manifest.json")
