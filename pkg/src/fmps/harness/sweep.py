"""Scaling sweeps over functions and qubit counts, with CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..bounds import theorem1_bound
from ..entropy import entropy_profile, fannes_checks, fidelity
from ..funcgrid import DEFAULT_GRID, FunctionSpec, discretize
from ..mps import TruncationPolicy, from_state_vector, truncate

log = logging.getLogger(__name__)

FORMAT_TAG = "#fmps-v1"
FLOAT_FMT = ".12g"


def parse_n_range(text: str) -> tuple[int, ...]:
    """Parse ``lo:hi[:step]`` or ``lo..hi`` (inclusive) or a comma list."""
    text = text.strip()
    if "," in text:
        values = tuple(int(v) for v in text.split(","))
    elif ".." in text or ":" in text:
        parts = text.replace("..", ":").split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad N range {text!r}")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1:
            raise ValueError("N range step must be >= 1")
        values = tuple(range(lo, hi + 1, step))
    else:
        values = (int(text),)
    return values


@dataclass(frozen=True)
class SweepConfig:
    functions: tuple[str, ...]
    n_values: tuple[int, ...]
    chi_list: tuple[int, ...] = (2,)
    delta: float = 0.01
    output_path: str | None = None
    seed: int = 0
    dense_cap: int = 16
    workers: int = 1
    grid: str = DEFAULT_GRID
    timing: bool = False

    def __post_init__(self):
        if not self.functions:
            raise ValueError("at least one function is required")
        if not self.n_values:
            raise ValueError("N range is empty")
        if min(self.n_values) < 2:
            raise ValueError("every N must be >= 2")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if any(c < 1 for c in self.chi_list):
            raise ValueError("truncation ranks must be >= 1")
        for text in self.functions:
            FunctionSpec.parse(text)

    @property
    def columns(self) -> list[str]:
        cols = ["function_id", "N", "chi_max_exact", "s_max", "argmax_cut"]
        cols += [f"fidelity_chi{c}" for c in self.chi_list]
        cols += ["theorem1_bound", "theorem1_pass", "fannes_min_slack", "error"]
        if self.timing:
            cols.append("runtime_ms")
        return cols


@dataclass
class SweepRow:
    function_id: str
    N: int
    chi_max_exact: int | None = None
    s_max: float | None = None
    argmax_cut: int | None = None
    fidelities: dict = field(default_factory=dict)
    theorem1_bound: float | None = None
    theorem1_pass: bool | None = None
    fannes_min_slack: float | None = None
    error: str = ""
    runtime_ms: float = 0.0
    smooth: bool = True

    @property
    def is_control(self) -> bool:
        return not self.smooth

    def as_record(self, config: SweepConfig) -> dict:
        rec = {
            "function_id": self.function_id,
            "N": self.N,
            "chi_max_exact": self.chi_max_exact,
            "s_max": self.s_max,
            "argmax_cut": self.argmax_cut,
        }
        for c in config.chi_list:
            rec[f"fidelity_chi{c}"] = self.fidelities.get(c)
        if self.theorem1_pass is None:
            passed = "control" if self.is_control and not self.error else None
        else:
            passed = self.theorem1_pass
        rec.update(
            theorem1_bound=self.theorem1_bound,
            theorem1_pass=passed,
            fannes_min_slack=self.fannes_min_slack,
            error=self.error,
        )
        if config.timing:
            rec["runtime_ms"] = round(self.runtime_ms, 3)
        return rec


def evaluate(function_id: str, n: int, config: SweepConfig) -> SweepRow:
    """Run the discretize, encode, profile, bound and truncate pipeline for one cell."""
    start = time.perf_counter()
    row = SweepRow(function_id, n)
    try:
        spec = FunctionSpec.parse(function_id)
        row.smooth = spec.is_smooth
        domain = spec.default_domain()
        state = discretize(spec, domain, n, grid=config.grid)
        exact = from_state_vector(state)
        row.chi_max_exact = exact.max_bond
        dense = n <= config.dense_cap
        profile = entropy_profile(state if dense else exact)
        row.s_max = profile.s_max
        row.argmax_cut = profile.argmax_cut
        bound = theorem1_bound(spec, domain, n, config.delta)
        if bound is not None:
            row.theorem1_bound = bound
            row.theorem1_pass = profile.s_max <= bound + 1e-9
        slacks = []
        for chi in config.chi_list:
            approx = truncate(exact, TruncationPolicy(chi_max=chi))
            row.fidelities[chi] = fidelity(exact, approx)
            if dense:
                slacks += [c.slack for c in fannes_checks(state, approx)]
        if slacks:
            row.fannes_min_slack = min(slacks)
    except Exception as exc:  # recorded per row; the sweep continues
        log.warning("sweep cell (%s, N=%d) failed: %s", function_id, n, exc)
        row.error = f"{type(exc).__name__}: {exc}"
    row.runtime_ms = 1000.0 * (time.perf_counter() - start)
    return row


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Evaluate every (function, N) cell; rows come back sorted by (function_id, N).

    With ``config.output_path`` set, the CSV (or JSON, by file suffix) is
    written there as well.
    """
    tasks = [(f, n) for f in config.functions for n in config.n_values]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda t: evaluate(t[0], t[1], config), tasks))
    else:
        rows = [evaluate(f, n, config) for f, n in tasks]
    rows.sort(key=lambda r: (r.function_id, r.N))
    if config.output_path:
        fmt = "json" if str(config.output_path).endswith(".json") else "csv"
        write_rows(rows, config, config.output_path, fmt)
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, FLOAT_FMT)
    return str(value)


def rows_to_csv(rows: list[SweepRow], config: SweepConfig) -> str:
    buf = io.StringIO()
    cols = config.columns
    buf.write(f"{FORMAT_TAG} columns={len(cols)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        rec = row.as_record(config)
        writer.writerow([_cell(rec[c]) for c in cols])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow], config: SweepConfig) -> str:
    def clean(v):
        if isinstance(v, float):
            return float(format(v, FLOAT_FMT))
        if isinstance(v, np.generic):
            return clean(v.item())
        return v

    records = [{k: clean(v) for k, v in r.as_record(config).items()} for r in rows]
    return json.dumps({"format": FORMAT_TAG.lstrip("#"), "columns": config.columns, "rows": records},
                      indent=2, sort_keys=False) + "\n"


def write_rows(rows, config: SweepConfig, path, fmt: str = "csv") -> None:
    text = rows_to_json(rows, config) if fmt == "json" else rows_to_csv(rows, config)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_rows(path) -> list[dict]:
    """Read a sweep CSV back as a list of typed dicts."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith(FORMAT_TAG):
            raise ValueError(f"{path} is not an fmps sweep file (missing {FORMAT_TAG} header)")
        reader = csv.DictReader(fh)
        out = []
        for rec in reader:
            typed = {}
            for key, value in rec.items():
                if key in ("function_id", "error", "theorem1_pass"):
                    typed[key] = value
                elif value == "":
                    typed[key] = None
                elif key in ("N", "chi_max_exact", "argmax_cut"):
                    typed[key] = int(value)
                else:
                    typed[key] = float(value)
            out.append(typed)
    return out
