"""Report and time-series serialization."""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps_json(obj) -> str:
    """Deterministic JSON; non-finite floats become the strings ``inf``/``nan``."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps_json(obj))
    return path


def series_columns(records) -> list[str]:
    n_blocks = len(records[0].block_energies) if records else 0
    return (["t", "E", "D", "vorticity_norm", "grad_m_norm"]
            + [f"block_q{q}" for q in range(-1, n_blocks - 1)])


def _cell(x) -> str:
    return "" if x is None else repr(float(x))


def write_series_csv(path: str | Path, records) -> Path:
    """One row per record; floats use ``repr`` so reruns are byte-identical."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(series_columns(records))
        for r in records:
            w.writerow([_cell(r.t), _cell(r.energy), _cell(r.dissipation),
                        _cell(r.vorticity_norm), _cell(r.grad_m_norm),
                        *(_cell(b) for b in r.block_energies)])
    return path


def read_series_csv(path: str | Path) -> dict[str, list[float | None]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty series file")
    header, body = rows[0], rows[1:]
    cols: dict[str, list[float | None]] = {h: [] for h in header}
    for row in body:
        if len(row) != len(header):
            raise ValueError(f"{path}: ragged row")
        for h, v in zip(header, row):
            cols[h].append(None if v == "" else float(v))
    return cols
