"""Deterministic JSON/CSV serialisation of domains, traces and high spots."""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import HighSpot, LevelCurve, SloshingDomain
from .kernel import Potential

SCHEMA_VERSION = 1
TRACE_STEP = 1e-3


def _num(x) -> float:
    # plain floats only; -0.0 prints as 0.0 so mirrored outputs stay stable
    return float(x) + 0.0


def curve_to_dict(c: LevelCurve) -> dict:
    return {
        "level": _num(c.level),
        "field": c.field,
        "endpoints": [k.value for k in c.endpoints_kind],
        "max_residual": _num(c.max_residual),
        "vertices": [[_num(x), _num(y)] for x, y in c.vertices],
    }


def spot_to_dict(s: HighSpot) -> dict:
    return {"x": _num(s.x), "kind": s.kind.value, "interior": s.interior, "value": _num(s.trace_value)}


def domain_to_dict(d: SloshingDomain, spots: Sequence[HighSpot] = ()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "case": d.case_tag.value,
        "mode": {"nu": _num(d.mode.nu), "family": d.mode.family.value},
        "level": _num(d.level),
        "free_surface": [_num(d.x_left), _num(d.x_right)],
        "bottom": [curve_to_dict(c) for c in d.bottom],
        "corners": [[_num(p.x), _num(p.y)] for p in d.corners],
        "high_spots": [spot_to_dict(s) for s in spots],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    lines = [",".join(header)]
    lines += [",".join(f"{_num(v):.12g}" for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def bottom_rows(d: SloshingDomain) -> np.ndarray:
    """Bottom vertices from ``(x_right, 0)`` to ``(x_left, 0)`` with joints listed once."""
    pieces = [d.bottom[0].vertices] + [c.vertices[1:] for c in d.bottom[1:]]
    return np.vstack(pieces)


def trace_grid(a: float, b: float, step: float = TRACE_STEP) -> np.ndarray:
    n = int(round((b - a) / step))
    return a + step * np.arange(n + 1)


def trace_rows(pot: Potential, xs: np.ndarray) -> np.ndarray:
    f = pot.field(xs, np.zeros_like(xs))
    return np.column_stack([xs, f.real, f.imag])


def write_text(path: Path, text: str) -> None:
    """Write with LF endings via a temporary file, so reruns overwrite atomically."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_case(out_dir: Path, d: SloshingDomain, spots: Sequence[HighSpot],
               formats: Sequence[str] = ("json", "csv")) -> list[Path]:
    pot = Potential(d.mode)
    written = []
    if "json" in formats:
        dd = domain_to_dict(d, spots)
        written.append(out_dir / "domain.json")
        write_text(written[-1], dumps(dd))
        written.append(out_dir / "highspots.json")
        write_text(written[-1], dumps({"schema_version": SCHEMA_VERSION, "case": dd["case"],
                                       "high_spots": dd["high_spots"]}))
    if "csv" in formats:
        written.append(out_dir / "bottom.csv")
        write_text(written[-1], csv_text(("x", "y"), bottom_rows(d)))
        written.append(out_dir / "trace.csv")
        xs = trace_grid(d.x_left, d.x_right)
        write_text(written[-1], csv_text(("x", "u", "v"), trace_rows(pot, xs)))
    return written
