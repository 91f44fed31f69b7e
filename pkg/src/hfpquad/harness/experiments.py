"""Experiment sweeps, row evaluation and CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ..engine import REFERENCE, evaluate_baseline, evaluate_hfp, search_optimal_n
from ..orthogonal import gauss_rule
from ..specialfn import exact_reference
from .config import SCHEMA_VERSION, ExperimentConfig, IntegrandSpec, WeightSpec, resolve_block
from .registry import make_integrand, parse_integrand_spec

WORKERS_ENV = "HFP_WORKERS"
NOT_IMPLEMENTED = "NOT-IMPLEMENTED"
SCHEMA_LINE = f"# hfpquad results schema {SCHEMA_VERSION}"


@dataclass(frozen=True)
class RowTask:
    block: str
    weight: WeightSpec
    integrand: IntegrandSpec
    xi: float
    p: int
    m: int
    n: Optional[int]
    search: Optional[tuple[int, int, str]]
    reference: Optional[str]
    baseline: bool
    far_node: bool
    nu_rule: str
    timing: bool


@dataclass(frozen=True)
class ResultRow:
    block: str
    integrand: str
    weight: str
    xi: float
    p: int
    m: int
    n_used: Optional[int]
    nu: Optional[int]
    nu_rule: str
    approx: Optional[float]
    exact: Optional[float]
    abs_error: Optional[float]
    baseline_approx: Optional[float]
    baseline_error: Optional[float]
    far_node_error: Optional[str]
    wall_time: Optional[float]
    status: str = "ok"


COLUMNS = tuple(f.name for f in fields(ResultRow))


def _exact_for(label: Optional[str], spec: IntegrandSpec, xi: float, p: int) -> Optional[float]:
    if label is None:
        return None
    try:
        if label == "I1":
            return exact_reference("I1", xi=xi, p=p).value
        if label == "I2":
            return exact_reference("I2").value
        return exact_reference("I3", xi=xi, lam=spec.params["lam"]).value
    except NotImplementedError:
        return None


def evaluate_row(task: RowTask) -> ResultRow:
    """Evaluate one (block, xi, m, n-policy) cell; errors are recorded, not raised."""
    w = task.weight.family()
    f = make_integrand(task.integrand.name, task.integrand.params)
    exact = _exact_for(task.reference, task.integrand, task.xi, task.p)
    base = dict(block=task.block, integrand=task.integrand.label(), weight=task.weight.label(),
                xi=task.xi, p=task.p, m=task.m, nu_rule=task.nu_rule, exact=exact,
                far_node_error=NOT_IMPLEMENTED if task.far_node else None)
    t0 = time.perf_counter()
    try:
        n = task.n
        if task.search is not None:
            lo, hi, criterion = task.search
            found = search_optimal_n(f, w, task.xi, task.p, task.m, (lo, hi), criterion=criterion,
                                     exact=exact if criterion == REFERENCE else None, nu_rule=task.nu_rule)
            n = found.n_hat
        res = evaluate_hfp(f, w, task.xi, task.p, task.m, n, nu_rule=task.nu_rule)
        wall = time.perf_counter() - t0
        b_val = b_err = None
        if task.baseline:
            try:
                b_val = evaluate_baseline(f, w, task.xi, task.p, task.m)
                b_err = abs(b_val - exact) if exact is not None else None
            except ZeroDivisionError:
                b_val = None
        return ResultRow(**base, n_used=n, nu=res.nu, approx=res.value,
                         abs_error=abs(res.value - exact) if exact is not None else None,
                         baseline_approx=b_val, baseline_error=b_err,
                         wall_time=wall if task.timing else None)
    except (ValueError, ArithmeticError, NotImplementedError) as exc:
        wall = time.perf_counter() - t0
        return ResultRow(**base, n_used=task.n, nu=None, approx=None, abs_error=None,
                         baseline_approx=None, baseline_error=None,
                         wall_time=wall if task.timing else None,
                         status=f"error: {type(exc).__name__}: {exc}")


def gauss_midpoints(cfg: ExperimentConfig) -> list[float]:
    nodes = []
    for m in cfg.m:
        x = gauss_rule(cfg.weight.family(), m).nodes
        nodes.extend(0.5 * (x[:-1] + x[1:]))
    return [float(v) for v in nodes]


def build_tasks(cfg: ExperimentConfig) -> list[RowTask]:
    blocks = cfg.blocks or ({},)
    tasks = []
    for blk in blocks:
        rb = resolve_block(cfg, blk)
        if cfg.experiment == "fig1":
            xis = list(cfg.xi_grid) + (gauss_midpoints(cfg) if cfg.gauss_midpoints else [])
        else:
            xis = [rb.xi]
        for xi in xis:
            for m in rb.m:
                common = dict(block=rb.label, weight=cfg.weight, integrand=rb.integrand, xi=xi, p=rb.p, m=m,
                              reference=cfg.reference, baseline=cfg.baseline, far_node=cfg.far_node_column,
                              nu_rule=cfg.nu_rule, timing=cfg.timing)
                if rb.n_policy.mode == "fixed":
                    for n in rb.n_policy.values:
                        tasks.append(RowTask(n=n, search=None, **common))
                else:
                    lo, hi = rb.n_policy.search_range(m, rb.p)
                    tasks.append(RowTask(n=None, search=(lo, hi, rb.n_policy.criterion), **common))
    return tasks


def worker_count(requested: Optional[int] = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def run_experiment(cfg: ExperimentConfig, workers: Optional[int] = None,
                   output: Optional[str] = None) -> list[ResultRow]:
    """Evaluate every row of the configuration; output order follows the config, not completion."""
    tasks = build_tasks(cfg)
    k = worker_count(workers)
    if k == 1 or len(tasks) < 2:
        rows = [evaluate_row(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=k) as pool:
            rows = list(pool.map(evaluate_row, tasks, chunksize=1))
    path = output or cfg.output
    if path:
        write_rows(rows, path, cfg.format, cfg)
    return rows


def summarize(rows: list[ResultRow]) -> dict:
    errs = [r.abs_error for r in rows if r.abs_error is not None]
    return {
        "rows": len(rows),
        "failed": sum(r.status != "ok" for r in rows),
        "max_abs_error": max(errs) if errs else None,
    }


# -- serialisation ---------------------------------------------------------

def format_number(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "NA"
    s = f"{x:.16g}"
    # 16 digits do not pin every double; fall back to 17 when needed
    return s if float(s) == x else f"{x:.17g}"


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(COLUMNS)
    for r in rows:
        wr.writerow([format_number(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list[ResultRow], cfg: Optional[ExperimentConfig] = None) -> str:
    def clean(v):
        if isinstance(v, float) and math.isnan(v):
            return None
        return v

    doc = {
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment if cfg else None,
        "config": cfg.to_dict() if cfg else None,
        "summary": summarize(rows),
        "rows": [{k: clean(v) for k, v in asdict(r).items()} for r in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_rows(rows: list[ResultRow], path: str, fmt: str = "csv", cfg: Optional[ExperimentConfig] = None) -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows, cfg)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    # single writer, whole file at once
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_INT_COLS = {"p", "m", "n_used", "nu"}
_STR_COLS = {"block", "integrand", "weight", "nu_rule", "far_node_error", "status"}


def read_csv_rows(path: str) -> list[ResultRow]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        kw = {}
        for c in COLUMNS:
            v = rec[c]
            if v == "NA":
                kw[c] = None
            elif c in _INT_COLS:
                kw[c] = int(v)
            elif c in _STR_COLS:
                kw[c] = v
            else:
                kw[c] = float(v)
        out.append(ResultRow(**kw))
    return out


def parse_weight_label(label: str) -> WeightSpec:
    kind, rest = label.split("(", 1)
    rest = rest.rstrip(")")
    if ";" in rest:
        ab, iv = rest.split(";")
        alpha, beta = (float(v) for v in ab.split(","))
    else:
        alpha = beta = 0.0
        iv = rest
    a, b = (float(v) for v in iv.split(","))
    return WeightSpec(kind, alpha, beta, a, b)


def reevaluate(row: ResultRow) -> float:
    """Recompute a row's approximation from the parameters stored in the row itself."""
    name, params = parse_integrand_spec(row.integrand)
    w = parse_weight_label(row.weight).family()
    f = make_integrand(name, params)
    return evaluate_hfp(f, w, row.xi, row.p, row.m, row.n_used, nu_rule=row.nu_rule).value
