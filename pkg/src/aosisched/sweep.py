"""Energy-grid sweeps: optimal cost, thresholds and transmit fractions over
(lambda1, lambda2), with CSV and SVG emission.

Rows are written lambda1-major in grid order and all numbers with 12
significant digits, so two runs of the same spec produce identical bytes.
Cells that fail (e.g. a boundary optimum that survives grid enlargement) are
recorded in a sidecar failures.log and the sweep continues.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .model import ModelParams
from .optimize import find_optimum
from .steady_state import transmit_fractions
from .svgplot import write_line_chart

__all__ = ["SweepSpec", "SweepResult", "run_sweep", "fmt_num", "OUTPUT_KINDS"]

OUTPUT_KINDS = ("cost_grid", "fractions_vs_lambda2", "policy_grid")

DEFAULT_GRID = tuple(float(x) for x in range(10))


def fmt_num(x) -> str:
    """12-significant-digit rendering used for all emitted numbers."""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


@dataclass(frozen=True)
class SweepSpec:
    base: ModelParams
    lambda1_grid: tuple = DEFAULT_GRID
    lambda2_grid: tuple = DEFAULT_GRID
    outputs: tuple = OUTPUT_KINDS
    n_max: int = 200

    def __post_init__(self):
        for name, grid in (("lambda1_grid", self.lambda1_grid),
                           ("lambda2_grid", self.lambda2_grid)):
            grid = tuple(float(v) for v in grid)
            if not grid:
                raise ValueError(f"{name} must be non-empty")
            if any(v < 0 for v in grid):
                raise ValueError(f"{name} values must be >= 0")
            object.__setattr__(self, name, grid)
        unknown = set(self.outputs) - set(OUTPUT_KINDS)
        if unknown:
            raise ValueError(f"unknown outputs: {sorted(unknown)}")
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)   # (lam1, lam2, n1, n2, F*, fc, fu)
    failures: list = field(default_factory=list)  # (lam1, lam2, message)
    files: list = field(default_factory=list)


def _evaluate_cell(spec: SweepSpec, lam1: float, lam2: float):
    params = spec.base.replace(lambda1=lam1, lambda2=lam2)
    res = find_optimum(params, n_max=spec.n_max)
    frac_c, frac_u = transmit_fractions(params, res.best)
    return (lam1, lam2, res.best.n1, res.best.n2, res.f_value, frac_c, frac_u)


def run_sweep(spec: SweepSpec, out_dir: str, jobs: int = 1,
              svg: bool = True) -> SweepResult:
    os.makedirs(out_dir, exist_ok=True)
    cells = [(l1, l2) for l1 in spec.lambda1_grid for l2 in spec.lambda2_grid]
    result = SweepResult()
    outcomes: dict[tuple, tuple] = {}
    errors: dict[tuple, str] = {}

    def work(cell):
        try:
            outcomes[cell] = _evaluate_cell(spec, *cell)
        except Exception as exc:  # record and keep sweeping
            errors[cell] = f"{type(exc).__name__}: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, cells))
    else:
        for cell in cells:
            work(cell)

    for cell in cells:  # deterministic lambda1-major order
        if cell in outcomes:
            result.rows.append(outcomes[cell])
        else:
            result.failures.append((*cell, errors[cell]))

    def emit(name: str, header: list, pick) -> None:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in result.rows:
                fh.write(",".join(fmt_num(v) for v in pick(row)) + "\n")
        result.files.append(path)

    if "cost_grid" in spec.outputs:
        emit("cost_grid.csv",
             ["lambda1", "lambda2", "n1", "n2", "F_star"],
             lambda r: (r[0], r[1], float(r[2]), float(r[3]), r[4]))
    if "fractions_vs_lambda2" in spec.outputs:
        emit("fractions.csv",
             ["lambda1", "lambda2", "frac_c", "frac_u"],
             lambda r: (r[0], r[1], r[5], r[6]))
    if "policy_grid" in spec.outputs:
        emit("policy_grid.csv",
             ["lambda1", "lambda2", "n1", "n2"],
             lambda r: (r[0], r[1], float(r[2]), float(r[3])))

    if result.failures:
        path = os.path.join(out_dir, "failures.log")
        with open(path, "w", encoding="utf-8") as fh:
            for lam1, lam2, msg in result.failures:
                fh.write(f"lambda1={fmt_num(lam1)} lambda2={fmt_num(lam2)}: {msg}\n")
        result.files.append(path)

    if svg:
        _emit_svgs(spec, result, out_dir)
    return result


def _series_by_lambda1(result: SweepResult, value_index: int):
    series = {}
    for row in result.rows:
        series.setdefault(row[0], ([], []))
        series[row[0]][0].append(row[1])
        series[row[0]][1].append(row[value_index])
    return series


def _emit_svgs(spec: SweepSpec, result: SweepResult, out_dir: str) -> None:
    if not result.rows:
        return
    if "cost_grid" in spec.outputs:
        by_l1 = _series_by_lambda1(result, 4)
        series = [(f"lambda1={fmt_num(l1)}", xs, ys)
                  for l1, (xs, ys) in by_l1.items()]
        path = os.path.join(out_dir, "cost_grid.svg")
        write_line_chart(path, series, "Optimal average cost",
                         "lambda2", "F*")
        result.files.append(path)
    if "fractions_vs_lambda2" in spec.outputs:
        wanted = [l1 for l1 in (1.0, 6.0) if l1 in spec.lambda1_grid]
        if not wanted:
            wanted = [spec.lambda1_grid[0]]
        frac_c = _series_by_lambda1(result, 5)
        frac_u = _series_by_lambda1(result, 6)
        series = []
        for l1 in wanted:
            if l1 in frac_c:
                series.append((f"frac_c, lambda1={fmt_num(l1)}", *frac_c[l1]))
                series.append((f"frac_u, lambda1={fmt_num(l1)}", *frac_u[l1]))
        if series:
            path = os.path.join(out_dir, "fractions.svg")
            write_line_chart(path, series,
                             "Transmit fractions at the optimum",
                             "lambda2", "fraction of slots")
            result.files.append(path)
