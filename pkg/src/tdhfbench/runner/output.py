"""CSV, summary and per-quantity data files. Numbers use 17 significant digits."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from tdhfbench.runner.config import RunConfig


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool,)):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return "%.17g" % x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def write_table(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def emit_outputs(result, cfg: RunConfig, out_dir: str | Path) -> list[Path]:
    """Write every table, the data series and summary.json; returns the written paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if result.scenario == "simulate" and not result.tables.get("records", (None, []))[1]:
        raise ValueError("simulate produced no records")
    written = []
    for name, (header, rows) in result.tables.items():
        path = out / f"{name}.csv"
        write_table(path, header, rows)
        written.append(path)
    if result.series:
        data = out / "data"
        data.mkdir(exist_ok=True)
        for col, pairs in result.series.items():
            path = data / f"{col}.dat"
            with path.open("w") as fh:
                fh.write(f"# t {col}\n")
                for t, v in pairs:
                    fh.write(f"{fmt(t)} {fmt(v)}\n")
            written.append(path)
    echo = cfg.to_dict()
    echo.pop("out", None)  # keeps summaries byte-identical across output locations
    summary = {
        "scenario": result.scenario,
        "config": echo,
        "passed": result.passed,
        "failures": result.failures,
        "checks": {k: {"value": c.value, "tol": c.tol, "passed": c.passed, **({"note": c.note} if c.note else {})}
                   for k, c in result.checks.items()},
        **result.summary,
    }
    path = out / "summary.json"
    path.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written
