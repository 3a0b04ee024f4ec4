"""Experiment runner: multi-seed trials, summary statistics, effect sizes,
budget-to-match analysis, and convergence-curve export.

Every experiment writes a self-describing output directory:

    <out>/<function>/<algorithm>/
        manifest.json        config echo + code version + seeds
        run_<seed>.csv       per-generation trace of one run
        summary.csv          best/median/worst/mean/std of final values
        convergence.csv      fe, mean_fv, std_fv across runs

Runs with the same config are bit-reproducible, so any file here can be
regenerated from the manifest alone.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import BenchmarkFunction, get_function
from .decomposition import Decomposition, ideal_decompose
from .runtime import RunParams, RunRecord
from .shade_cc import ShadeCC
from .surrogate_cc import SurrogateCC

ALGORITHMS = ("sacc", "shade-cc")

OUTDIR_ENV = "COOPEVO_OUTDIR"


@dataclass(frozen=True)
class ExperimentConfig:
    functions: tuple[str, ...]
    dim: int
    algorithm: str
    budget: int
    runs: int = 25
    seed: int = 1
    s_sep: int = 20
    p: int = 100
    q: int = 10
    d_factor: int = 5
    memory_size: int = 10
    visit_len: int = 100
    suite_seed: int = 1
    out: str = "results"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.functions:
            raise ValueError("at least one function id required")
        # RunParams validates the optimizer parameters
        self.run_params()

    def run_params(self) -> RunParams:
        return RunParams(
            max_fe=self.budget,
            p=self.p,
            q=self.q,
            d_factor=self.d_factor,
            memory_size=self.memory_size,
            visit_len=self.visit_len,
        )

    def out_dir(self) -> Path:
        return Path(os.environ.get(OUTDIR_ENV, self.out))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["functions"] = list(self.functions)
        return d


@dataclass(frozen=True)
class SummaryRow:
    function_id: str
    algorithm: str
    budget: int
    runs: int
    best: float
    median: float
    worst: float
    mean: float
    std: float

    def __post_init__(self):
        if not (self.best <= self.median <= self.worst):
            raise ValueError("summary ordering violated")

    @staticmethod
    def from_finals(function_id: str, algorithm: str, budget: int, finals) -> "SummaryRow":
        finals = np.asarray(finals, dtype=float)
        return SummaryRow(
            function_id=function_id,
            algorithm=algorithm,
            budget=budget,
            runs=int(finals.size),
            best=float(finals.min()),
            median=float(np.median(finals)),
            worst=float(finals.max()),
            mean=float(finals.mean()),
            std=float(finals.std(ddof=0)),
        )


def build_problem(config: ExperimentConfig, fid: str) -> tuple[BenchmarkFunction, Decomposition]:
    fn = get_function(fid, config.dim, config.suite_seed)
    decomp = ideal_decompose(fn.structure, config.s_sep, fn.lower, fn.upper)
    return fn, decomp


def run_single(
    config: ExperimentConfig,
    fn: BenchmarkFunction,
    decomp: Decomposition,
    seed: int,
) -> RunRecord:
    params = config.run_params()
    if config.algorithm == "sacc":
        return SurrogateCC(fn, decomp, params, seed).run()
    return ShadeCC(fn, decomp, params, seed).run()


def mean_curve(records: list[RunRecord]) -> np.ndarray:
    """Cross-run mean/std of the traced fitness on the shared FE grid.

    Runs of one config follow an identical evaluation schedule, so rows
    align one-to-one. Returns an array of (fe, mean_fv, std_fv) rows.
    """
    if not records:
        raise ValueError("no traces to aggregate")
    lengths = {len(r.rows) for r in records}
    if len(lengths) != 1:
        raise ValueError("trace lengths differ; runs are not aligned")
    fes = np.array([row.fe_used for row in records[0].rows], dtype=float)
    values = np.array([[row.f_best for row in rec.rows] for rec in records])
    return np.column_stack([fes, values.mean(axis=0), values.std(axis=0, ddof=0)])


def export_convergence(records: list[RunRecord], path: str | Path) -> Path:
    """Write the cross-run mean curve as CSV with a fixed schema."""
    curve = mean_curve(records)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["fe", "mean_fv", "std_fv"])
        for fe, mean_fv, std_fv in curve:
            writer.writerow([int(fe), repr(float(mean_fv)), repr(float(std_fv))])
    return path


def read_convergence(path: str | Path) -> np.ndarray:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["fe", "mean_fv", "std_fv"]:
            raise ValueError(f"unexpected convergence header {header}")
        rows = [(float(a), float(b), float(c)) for a, b, c in reader]
    return np.asarray(rows)


def cohens_d(mean_a: float, std_a: float, mean_b: float, std_b: float) -> tuple[float, str]:
    """Standardized mean difference with the pooled equal-n denominator:

        d = (mean_a - mean_b) / sqrt((std_a^2 + std_b^2) / 2)

    The magnitude label uses the bands |d| < 0.2 similar, [0.2, 0.3) small,
    [0.3, 0.8) medium, and [0.8, inf) large. A zero pooled spread yields
    d = 0 for equal means and a signed infinity otherwise.
    """
    pooled = math.sqrt((std_a * std_a + std_b * std_b) / 2.0)
    if pooled == 0.0:
        if mean_a == mean_b:
            return 0.0, "similar"
        return math.copysign(math.inf, mean_a - mean_b), "large"
    d = (mean_a - mean_b) / pooled
    return d, effect_label(d)


def effect_label(d: float) -> str:
    mag = abs(d)
    if mag >= 0.8:
        return "large"
    if mag >= 0.3:
        return "medium"
    if mag >= 0.2:
        return "small"
    return "similar"


def fes_to_match(target: float, curve: np.ndarray) -> int | None:
    """Smallest evaluation count at which the mean curve reaches ``target``
    (mean FV <= target); None when the curve never gets there."""
    if curve.size == 0:
        raise ValueError("empty convergence curve")
    hits = np.flatnonzero(curve[:, 1] <= target)
    if hits.size == 0:
        return None
    return int(curve[hits[0], 0])


COHENS_D_FORMULA = "(mean_a - mean_b) / sqrt((std_a^2 + std_b^2) / 2)"


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    summaries: list[SummaryRow]
    records: dict[str, list[RunRecord]]      # function id -> per-seed records
    paths: dict[str, Path]

    def summary_for(self, fid: str) -> SummaryRow:
        for row in self.summaries:
            if row.function_id == fid:
                return row
        raise KeyError(fid)


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Execute ``config.runs`` independent seeded trials per function.

    Seeds are ``seed .. seed + runs - 1``. With ``write=True`` (default) the
    traces, summaries, convergence curves and a reconstruction manifest are
    written under the output directory.
    """
    summaries: list[SummaryRow] = []
    all_records: dict[str, list[RunRecord]] = {}
    paths: dict[str, Path] = {}

    for fid in config.functions:
        fn, decomp = build_problem(config, fid)
        records = [
            run_single(config, fn, decomp, seed)
            for seed in range(config.seed, config.seed + config.runs)
        ]
        finals = [rec.final_f for rec in records]
        summary = SummaryRow.from_finals(fid, config.algorithm, config.budget, finals)
        summaries.append(summary)
        all_records[fid] = records

        if write:
            out = config.out_dir() / fid / config.algorithm
            out.mkdir(parents=True, exist_ok=True)
            for rec in records:
                rec.write_csv(out / f"run_{rec.seed}.csv")
            export_convergence(records, out / "convergence.csv")
            _write_summary_csv([summary], out / "summary.csv")
            manifest = {
                "config": config.to_dict(),
                "function": fn.manifest(),
                "decomposition": decomp.to_dict(),
                "seeds": list(range(config.seed, config.seed + config.runs)),
                "code_version": __version__,
                "cohens_d_formula": COHENS_D_FORMULA,
                "summary": dataclasses.asdict(summary),
            }
            with open(out / "manifest.json", "w") as handle:
                json.dump(manifest, handle, indent=2, sort_keys=True)
            paths[fid] = out

    return ExperimentResult(config, summaries, all_records, paths)


def _write_summary_csv(rows: list[SummaryRow], path: Path):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["function", "algorithm", "budget", "runs", "best", "median", "worst", "mean", "std"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.function_id,
                    r.algorithm,
                    r.budget,
                    r.runs,
                    repr(r.best),
                    repr(r.median),
                    repr(r.worst),
                    repr(r.mean),
                    repr(r.std),
                ]
            )


def compare_algorithms(config: ExperimentConfig) -> dict:
    """Run both optimizers under one config and quantify the gap per
    function with the standardized mean difference."""
    result = {}
    for algorithm in ALGORITHMS:
        cfg = dataclasses.replace(config, algorithm=algorithm)
        result[algorithm] = run_experiment(cfg)
    rows = []
    for fid in config.functions:
        a = result["sacc"].summary_for(fid)
        b = result["shade-cc"].summary_for(fid)
        d, label = cohens_d(a.mean, a.std, b.mean, b.std)
        rows.append(
            {
                "function": fid,
                "sacc_mean": a.mean,
                "sacc_std": a.std,
                "shade_cc_mean": b.mean,
                "shade_cc_std": b.std,
                "cohens_d": d,
                "label": label,
            }
        )
    return {"results": result, "comparison": rows}
