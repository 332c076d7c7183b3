"""CSV/JSON writers with self-identifying headers.

Every output file carries a schema id, the package version and a hash of the
generating configuration, so downstream consumers (the plotting frontend and
the test fixtures) can reject files they do not understand.  Floats are
written with 17 significant digits for lossless round-tripping.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__

SCHEMA_PREFIX = "twocenter"


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def write_csv(path: Path, schema: str, config: dict, columns: list[str],
              rows, meta: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        f"# schema: {SCHEMA_PREFIX}.{schema}",
        f"# version: {__version__}",
        f"# config-hash: {config_hash(config)}",
    ]
    for key, val in (meta or {}).items():
        lines.append(f"# {key}: {val}")
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append("1" if v else "0")
            elif isinstance(v, (int,)):
                cells.append(str(v))
            elif isinstance(v, str):
                cells.append(v)
            else:
                cells.append(fmt_float(v))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv_header(path: Path) -> dict:
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].partition(":")
            meta[key.strip()] = val.strip()
    return meta


def write_json(path: Path, schema: str, config: dict, results,
               diagnostics: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "schema": f"{SCHEMA_PREFIX}.{schema}",
        "version": __version__,
        "config": dict(config, hash=config_hash(config)),
        "results": results,
        "diagnostics": diagnostics or {},
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_coerce) + "\n")
    return path


def _coerce(obj):
    import numpy as np

    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return str(obj)


def grid_region_count(physical: "np.ndarray") -> int:
    """4-connected components of the physical cells of a classification grid."""
    import numpy as np

    mask = np.asarray(physical, dtype=bool)
    seen = np.zeros_like(mask)
    count = 0
    nr, nc = mask.shape
    for i in range(nr):
        for j in range(nc):
            if mask[i, j] and not seen[i, j]:
                count += 1
                stack = [(i, j)]
                seen[i, j] = True
                while stack:
                    r, c = stack.pop()
                    for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                        if 0 <= rr < nr and 0 <= cc < nc and mask[rr, cc] \
                                and not seen[rr, cc]:
                            seen[rr, cc] = True
                            stack.append((rr, cc))
    return count
