"""Cooperative coevolution with surrogate-filtered sub-solution evaluation.

One optimization run keeps a context vector (the best complete solution), a
per-sub-problem population of real-evaluated sub-solutions, and a
per-sub-problem surrogate trained on an archive of the newest real samples.
Sub-problems are visited round-robin for a single generation each: the
surrogate scores all parent/trial pairs, only the few most promising trials
are re-evaluated against the simulation model, and those real samples feed
the population, the surrogate archive and, when the best member carries a
positive improvement, the context vector itself.

All stored values are fitness improvements relative to the current context;
whenever the context improves by ``delta``, the affected sub-problem's
stored improvements are shifted down by ``delta`` so they stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .benchmarks import BenchmarkFunction
from .decomposition import Decomposition, SubProblem, embed
from .rbf import TrainingArchive, TrainingError, train_surrogate
from .runtime import (
    AuditFailure,
    BudgetExhausted,
    ContextState,
    FeBudget,
    RunParams,
    RunRecord,
    real_improvement,
)
from .shade import (
    InferiorArchive,
    ParameterMemory,
    mutate_crossover,
    pbest_fraction,
    sample_params,
    select_best,
    two_step_select,
    worst_replacement,
)

AUDIT_RTOL = 1e-9


@dataclass
class SubState:
    """Mutable per-sub-problem search state."""

    sub: SubProblem
    archive: TrainingArchive
    pop: np.ndarray            # (p, s) real-evaluated sub-solutions
    pop_vals: np.ndarray       # (p,) their improvements vs current context
    memory: ParameterMemory
    inferior: InferiorArchive
    rng: np.random.Generator


@dataclass
class GenReport:
    """What one generation did (mostly for tests and instrumentation)."""

    generation: int
    sub_id: int
    trials: int
    real_evals: int
    success_idx: np.ndarray
    evaluated_idx: list[int]
    context_updated: bool
    truncated: bool
    fallback: bool
    f_best: float

    @property
    def successes(self) -> int:
        return int(self.success_idx.size)


def initialization_cost(decomposition: Decomposition, params: RunParams) -> int:
    """Real evaluations consumed before the first generation."""
    return 1 + sum(
        max(params.d_factor * sub.s, params.p) for sub in decomposition.subproblems
    )


class SurrogateCC:
    """One seeded run of the surrogate-assisted optimizer.

    ``audit=True`` re-evaluates the context after every context update (not
    charged to the budget) and verifies both the book-kept context fitness
    and a spot-checked stored improvement of an uninvolved sub-problem.
    """

    def __init__(
        self,
        fn: BenchmarkFunction,
        decomposition: Decomposition,
        params: RunParams,
        seed: int,
        audit: bool = False,
        log_params: bool = False,
    ):
        if decomposition.n != fn.n:
            raise ValueError("decomposition does not match function dimension")
        init_cost = initialization_cost(decomposition, params)
        if params.max_fe < init_cost:
            raise ValueError(
                f"budget {params.max_fe} below initialization cost {init_cost}"
            )

        self.fn = fn
        self.decomposition = decomposition
        self.params = params
        self.seed = seed
        self.audit = audit
        self.log_params = log_params
        self.budget = FeBudget(params.max_fe)

        streams = np.random.SeedSequence(seed).spawn(decomposition.k + 1)
        self.rng = np.random.default_rng(streams[0])

        x0 = self.rng.uniform(fn.lower, fn.upper)
        self.budget.spend()
        self.context = ContextState(x0, fn(x0))

        self.subs: list[SubState] = []
        for g, sub in enumerate(decomposition.subproblems):
            rng = np.random.default_rng(streams[g + 1])
            p = params.p
            d = params.d_factor * sub.s
            inferior = InferiorArchive(rng.uniform(sub.lower, sub.upper, (p, sub.s)))
            pool = rng.uniform(sub.lower, sub.upper, (max(d, p), sub.s))
            vals = np.array(
                [
                    real_improvement(fn, self.budget, self.context, sub, x)
                    for x in pool
                ]
            )
            archive = TrainingArchive(d, sub.lower, sub.upper)
            archive.fill(pool[-d:], vals[-d:])
            best = select_best(vals, p)
            self.subs.append(
                SubState(
                    sub=sub,
                    archive=archive,
                    pop=pool[best].copy(),
                    pop_vals=vals[best].copy(),
                    memory=ParameterMemory(params.memory_size),
                    inferior=inferior,
                    rng=rng,
                )
            )

        self.cursor = 0
        self.generation = 0
        self.record = RunRecord(
            algorithm="sacc",
            function_id=fn.fid,
            n=fn.n,
            seed=seed,
            params={
                "max_fe": params.max_fe,
                "p": params.p,
                "q": params.q,
                "d_factor": params.d_factor,
                "memory_size": params.memory_size,
            },
            decomposition=decomposition.to_dict(),
        )
        self.record.add_row(0, -1, self.budget.used, self.context.f)

    def step(self, predictor: Callable[[np.ndarray], np.ndarray] | None = None) -> GenReport:
        """Run a single generation on the sub-problem under the cursor.

        ``predictor`` replaces the trained surrogate for this generation
        (a testing seam); it must map an (m, s) batch to m scores without
        touching the evaluation budget.
        """
        if self.budget.exhausted:
            raise BudgetExhausted("no budget left for another generation")

        g = self.cursor
        st = self.subs[g]
        sub, rng = st.sub, st.rng
        p, q = self.params.p, self.params.q

        fallback = False
        if predictor is None:
            try:
                model = train_surrogate(st.archive)
                predictor = model.predict_batch
            except TrainingError:
                fallback = True

        f_used = np.empty(p)
        cr_used = np.empty(p)
        trials = np.empty((p, sub.s))
        for i in range(p):
            f_i, cr_i = sample_params(st.memory, rng)
            frac = pbest_fraction(p, rng)
            trials[i] = mutate_crossover(
                st.pop, st.pop_vals, st.inferior.slots, i, f_i, cr_i, frac,
                sub.lower, sub.upper, rng,
            )
            f_used[i] = f_i
            cr_used[i] = cr_i

        def real_eval(idx: int) -> float | None:
            if self.budget.exhausted:
                return None
            return real_improvement(self.fn, self.budget, self.context, sub, trials[idx])

        if fallback:
            # no usable surrogate: evaluate every trial against the real
            # model this generation so the search can continue
            parent_scores = st.pop_vals.copy()
            trial_scores, evaluated, successes, truncated = two_step_select(
                parent_scores, np.full(p, -np.inf), p, real_eval
            )
            self.record.fallback_generations += 1
        else:
            parent_scores = predictor(st.pop)
            trial_scores, evaluated, successes, truncated = two_step_select(
                parent_scores, predictor(trials), q, real_eval
            )
        for i in successes:
            st.inferior.replace_random(st.pop[i], rng)
        st.memory.update(
            f_used[successes],
            cr_used[successes],
            trial_scores[successes] - parent_scores[successes],
        )

        if evaluated:
            batch = evaluated[-st.archive.capacity:]
            st.archive.push(trials[batch], trial_scores[batch])
            worst_replacement(
                st.pop, st.pop_vals, trials[evaluated], trial_scores[evaluated]
            )

        context_updated = False
        best = int(np.argmax(st.pop_vals))
        gain = float(st.pop_vals[best])
        if gain > 0.0:
            self.context.x = embed(self.context.x, sub, st.pop[best])
            self.context.f -= gain
            self.context.version += 1
            st.archive.rebase(gain)
            st.pop_vals -= gain
            context_updated = True
            self.record.context_updates += 1
            if self.audit:
                self._run_audit(g)

        self.generation += 1
        self.cursor = (self.cursor + 1) % self.decomposition.k
        self.record.loop_trials += p
        self.record.loop_real_evals += len(evaluated)
        if self.log_params:
            self.record.param_log.append(
                (self.generation, g, f_used.tolist(), cr_used.tolist())
            )
        self.record.add_row(self.generation, g, self.budget.used, self.context.f)
        return GenReport(
            generation=self.generation,
            sub_id=g,
            trials=p,
            real_evals=len(evaluated),
            success_idx=successes,
            evaluated_idx=evaluated,
            context_updated=context_updated,
            truncated=truncated,
            fallback=fallback,
            f_best=self.context.f,
        )

    def _run_audit(self, g: int):
        # uncharged re-evaluations; failures indicate book-keeping drift
        fresh = self.fn(self.context.x)
        rel = abs(fresh - self.context.f) / max(1.0, abs(fresh))
        self.record.max_audit_rel_err = max(self.record.max_audit_rel_err, rel)
        if rel > AUDIT_RTOL:
            raise AuditFailure(
                f"context fitness drift {rel:.3e} (kept {self.context.f!r}, "
                f"re-evaluated {fresh!r})"
            )
        if self.decomposition.k > 1:
            h = (g + 1) % self.decomposition.k
            other = self.subs[h]
            stored = float(other.pop_vals[0])
            fresh_imp = self.context.f - self.fn(
                embed(self.context.x, other.sub, other.pop[0])
            )
            err = abs(fresh_imp - stored) / max(1.0, abs(stored))
            self.record.max_crosscheck_err = max(self.record.max_crosscheck_err, err)
            if err > AUDIT_RTOL:
                raise AuditFailure(
                    f"stored improvement of sub-problem {h} drifted by {err:.3e}"
                )

    def run(self) -> RunRecord:
        """Step until the evaluation budget is exhausted."""
        while not self.budget.exhausted:
            self.step()
        self.record.final_x = self.context.x.copy()
        self.record.final_f = self.context.f
        return self.record
