"""Cooperative coevolution baseline with exhaustively real evaluation.

Same decomposition and the same adaptive differential evolution machinery
as the surrogate-assisted optimizer, but every trial vector is scored by
embedding it into the context vector and calling the simulation model. A
selected sub-problem is optimized for a fixed number of consecutive
generations per visit, and its population is re-evaluated against the
current context whenever the visit starts; both costs are charged to the
evaluation budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .benchmarks import BenchmarkFunction
from .decomposition import Decomposition, SubProblem, embed
from .runtime import ContextState, FeBudget, RunParams, RunRecord
from .shade import (
    InferiorArchive,
    ParameterMemory,
    mutate_crossover,
    pbest_fraction,
    sample_params,
)


@dataclass
class CcSubState:
    sub: SubProblem
    pop: np.ndarray            # (p, s)
    f_vals: np.ndarray         # (p,) embedded fitness, smaller is better
    fresh: np.ndarray          # (p,) bool: evaluated under current context
    memory: ParameterMemory
    inferior: InferiorArchive
    rng: np.random.Generator


class ShadeCC:
    """One seeded run of the traditional cooperative coevolution baseline."""

    def __init__(
        self,
        fn: BenchmarkFunction,
        decomposition: Decomposition,
        params: RunParams,
        seed: int,
    ):
        if decomposition.n != fn.n:
            raise ValueError("decomposition does not match function dimension")
        self.fn = fn
        self.decomposition = decomposition
        self.params = params
        self.seed = seed
        self.budget = FeBudget(params.max_fe)

        streams = np.random.SeedSequence(seed).spawn(decomposition.k + 1)
        self.rng = np.random.default_rng(streams[0])

        x0 = self.rng.uniform(fn.lower, fn.upper)
        self.budget.spend()
        self.context = ContextState(x0, fn(x0))

        p = params.p
        self.subs: list[CcSubState] = []
        for g, sub in enumerate(decomposition.subproblems):
            rng = np.random.default_rng(streams[g + 1])
            inferior = InferiorArchive(rng.uniform(sub.lower, sub.upper, (p, sub.s)))
            pop = rng.uniform(sub.lower, sub.upper, (p, sub.s))
            self.subs.append(
                CcSubState(
                    sub=sub,
                    pop=pop,
                    f_vals=np.full(p, np.inf),
                    fresh=np.zeros(p, dtype=bool),
                    memory=ParameterMemory(params.memory_size),
                    inferior=inferior,
                    rng=rng,
                )
            )

        self.cursor = 0
        self.generation = 0
        self.record = RunRecord(
            algorithm="shade-cc",
            function_id=fn.fid,
            n=fn.n,
            seed=seed,
            params={
                "max_fe": params.max_fe,
                "p": params.p,
                "memory_size": params.memory_size,
                "visit_len": params.visit_len,
            },
            decomposition=decomposition.to_dict(),
        )
        self.record.add_row(0, -1, self.budget.used, self.context.f)

    def _embedded_fitness(self, sub: SubProblem, x_g: np.ndarray) -> float:
        self.budget.spend()
        return self.fn(embed(self.context.x, sub, x_g))

    def _visit(self, g: int):
        st = self.subs[g]
        sub, rng = st.sub, st.rng
        p = self.params.p

        # stored values were taken under an older context; refresh them
        st.fresh[:] = False
        for i in range(p):
            if self.budget.exhausted:
                break
            st.f_vals[i] = self._embedded_fitness(sub, st.pop[i])
            st.fresh[i] = True
            self.record.reeval_evals += 1

        for _ in range(self.params.visit_len):
            if self.budget.exhausted or not st.fresh.all():
                break
            trials = np.empty((p, sub.s))
            f_used = np.empty(p)
            cr_used = np.empty(p)
            for i in range(p):
                f_i, cr_i = sample_params(st.memory, rng)
                frac = pbest_fraction(p, rng)
                trials[i] = mutate_crossover(
                    st.pop, -st.f_vals, st.inferior.slots, i, f_i, cr_i, frac,
                    sub.lower, sub.upper, rng,
                )
                f_used[i] = f_i
                cr_used[i] = cr_i

            evaluated: list[tuple[int, float]] = []
            for i in range(p):
                if self.budget.exhausted:
                    break
                evaluated.append((i, self._embedded_fitness(sub, trials[i])))

            sf, scr, deltas = [], [], []
            for i, f_u in evaluated:
                if f_u <= st.f_vals[i]:
                    if f_u < st.f_vals[i]:
                        st.inferior.replace_random(st.pop[i], rng)
                        sf.append(f_used[i])
                        scr.append(cr_used[i])
                        deltas.append(st.f_vals[i] - f_u)
                    st.pop[i] = trials[i]
                    st.f_vals[i] = f_u
            st.memory.update(np.array(sf), np.array(scr), np.array(deltas))

            self.generation += 1
            self.record.loop_trials += p
            self.record.loop_real_evals += len(evaluated)
            f_best = min(self.context.f, float(st.f_vals[st.fresh].min()))
            self.record.add_row(self.generation, g, self.budget.used, f_best)

        # harvest: embed the best fresh member if it beats the context
        if st.fresh.any():
            masked = np.where(st.fresh, st.f_vals, np.inf)
            b = int(np.argmin(masked))
            if masked[b] < self.context.f:
                self.context.x = embed(self.context.x, sub, st.pop[b])
                self.context.f = float(masked[b])
                self.context.version += 1
                self.record.context_updates += 1

    def run(self) -> RunRecord:
        while not self.budget.exhausted:
            self._visit(self.cursor)
            self.cursor = (self.cursor + 1) % self.decomposition.k
        self.record.final_x = self.context.x.copy()
        self.record.final_f = self.context.f
        return self.record
