"""Shared run-time pieces: evaluation budget, context vector, run records."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .benchmarks import BenchmarkFunction
from .decomposition import SubProblem, embed


class BudgetExhausted(RuntimeError):
    """Raised when a real evaluation is requested with no budget left."""


class AuditFailure(RuntimeError):
    """Raised in audit mode when book-kept values drift from re-evaluation."""


class FeBudget:
    """Strict counter of real fitness evaluations."""

    def __init__(self, max_fe: int):
        if max_fe < 1:
            raise ValueError("max_fe must be >= 1")
        self.max_fe = int(max_fe)
        self.used = 0

    @property
    def exhausted(self) -> bool:
        return self.used >= self.max_fe

    @property
    def remaining(self) -> int:
        return self.max_fe - self.used

    def spend(self):
        if self.exhausted:
            raise BudgetExhausted(f"all {self.max_fe} evaluations used")
        self.used += 1


@dataclass
class ContextState:
    """Best complete solution found so far and its real fitness."""

    x: np.ndarray
    f: float
    version: int = 0


def real_improvement(
    fn: BenchmarkFunction,
    budget: FeBudget,
    context: ContextState,
    sub: SubProblem,
    x_g: np.ndarray,
) -> float:
    """Fitness gain of embedding ``x_g`` into the context; one budgeted
    evaluation. Positive means the embedded solution beats the context."""
    budget.spend()
    return context.f - fn(embed(context.x, sub, x_g))


@dataclass(frozen=True)
class RunParams:
    """Parameter surface shared by both optimizers.

    ``q``, ``d_factor`` only matter to the surrogate-assisted algorithm;
    ``visit_len`` only to the plain one.
    """

    max_fe: int
    p: int = 100
    q: int = 10
    d_factor: int = 5
    memory_size: int = 10
    visit_len: int = 100

    def __post_init__(self):
        if self.p < 4:
            raise ValueError("population size must be >= 4")
        if not 1 <= self.q <= self.p:
            raise ValueError("q must be in 1..p")
        if self.d_factor < 1:
            raise ValueError("d_factor must be >= 1")
        if self.memory_size < 1:
            raise ValueError("memory_size must be >= 1")
        if self.visit_len < 1:
            raise ValueError("visit_len must be >= 1")
        if self.max_fe < 1:
            raise ValueError("max_fe must be >= 1")


@dataclass(frozen=True)
class GenRow:
    """One per-generation trace entry."""

    generation: int
    sub_id: int
    fe_used: int
    f_best: float


@dataclass
class RunRecord:
    """Everything needed to audit one optimization run."""

    algorithm: str
    function_id: str
    n: int
    seed: int
    params: dict
    rows: list[GenRow] = field(default_factory=list)
    final_x: np.ndarray | None = None
    final_f: float = float("nan")
    loop_trials: int = 0
    loop_real_evals: int = 0
    reeval_evals: int = 0
    fallback_generations: int = 0
    context_updates: int = 0
    max_audit_rel_err: float = 0.0
    max_crosscheck_err: float = 0.0
    decomposition: dict | None = None
    param_log: list = field(default_factory=list)  # (gen, sub, F list, CR list)

    HEADER = ("generation", "sub_id", "fe_used", "f_best")

    def add_row(self, generation: int, sub_id: int, fe_used: int, f_best: float):
        self.rows.append(GenRow(generation, sub_id, fe_used, f_best))

    def write_csv(self, path: str | Path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(self.HEADER)
            for row in self.rows:
                writer.writerow(
                    [row.generation, row.sub_id, row.fe_used, repr(row.f_best)]
                )

    @staticmethod
    def read_csv(path: str | Path) -> list[GenRow]:
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            if tuple(header) != RunRecord.HEADER:
                raise ValueError(f"unexpected trace header {header}")
            return [
                GenRow(int(g), int(sid), int(fe), float(fb))
                for g, sid, fe, fb in reader
            ]
