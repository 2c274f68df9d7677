"""Plain-text exports and provenance sidecars.

Every writer goes through a temp file in the target directory followed by
``os.replace``, so a reader never sees a half-written file. CSV bodies are
formatted deterministically (``%.17g``); run metadata such as timestamps
lives only in the JSON sidecar.
"""

from __future__ import annotations

import json
import os
import platform
import sys
import tempfile
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy
import scipy.sparse as sp

from .core import BIT_CONVENTION

FLOAT_FMT = "%.17g"


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(x) -> str:
    if isinstance(x, (str, np.str_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return FLOAT_FMT % float(x)


def format_table(columns: dict, comments=()) -> str:
    """CSV text with optional ``#`` comment lines and a header row."""
    names = list(columns)
    cols = [np.asarray(columns[n]) for n in names]
    n = {c.shape[0] for c in cols}
    if len(n) > 1:
        raise ValueError("columns have different lengths")
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(names))
    for row in zip(*cols):
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path, columns: dict, comments=()) -> Path:
    return atomic_write_text(path, format_table(columns, comments))


def read_csv(path) -> dict[str, np.ndarray]:
    """Read a table written by :func:`write_csv`; non-numeric columns stay strings."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    names = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    out = {}
    for j, name in enumerate(names):
        raw = [r[j] for r in rows]
        try:
            out[name] = np.array([float(x) for x in raw])
        except ValueError:
            out[name] = np.array(raw)
    return out


def write_operator(path, H) -> Path:
    """Coordinate list ``row, col, re, im`` (0-based computational indices)."""
    coo = sp.coo_matrix(H)
    data = coo.data.astype(complex)
    return write_csv(
        path,
        {"row": coo.row, "col": coo.col, "re": data.real, "im": data.imag},
        comments=[BIT_CONVENTION],
    )


def read_operator(path, dim: int | None = None) -> sp.csr_matrix:
    t = read_csv(path)
    rows, cols = t["row"].astype(int), t["col"].astype(int)
    n = dim if dim is not None else int(max(rows.max(), cols.max())) + 1
    vals = t["re"] + 1j * t["im"]
    if not np.any(vals.imag):
        vals = vals.real
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def write_state(path, v: np.ndarray) -> Path:
    v = np.asarray(v, dtype=complex)
    return write_csv(
        path, {"index": np.arange(v.size), "re": v.real, "im": v.imag}, comments=[BIT_CONVENTION]
    )


def write_tb_coefficients(path, coeffs: np.ndarray) -> Path:
    c = np.asarray(coeffs, dtype=complex)
    return write_csv(
        path,
        {"r": np.arange(1, c.size + 1), "re": c.real, "im": c.imag},
        comments=["ring coordinate r: A_m at r = 2m - 1, B_m at r = 2m"],
    )


def read_vector(path) -> np.ndarray:
    t = read_csv(path)
    return t["re"] + 1j * t["im"]


def package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def provenance(config: dict | None = None, **extra) -> dict:
    info = {
        "package": "eastwest",
        "version": package_version(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
        "bit_convention": BIT_CONVENTION,
    }
    if config is not None:
        info["config"] = config
    info.update(extra)
    return info


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def write_sidecar(data_path, config: dict | None = None, **extra) -> Path:
    """``<data file>.json`` next to a data file."""
    data_path = Path(data_path)
    meta = _jsonable(provenance(config, output=data_path.name, **extra))
    return atomic_write_text(data_path.with_suffix(data_path.suffix + ".json"),
                             json.dumps(meta, indent=2, sort_keys=True) + "\n")
