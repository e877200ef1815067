"""Simulated multi-machine solvers.

Workers run in-process over disjoint random partitions, but everything
crossing the worker boundary goes through a serializable WorkerOutput, so a
networked backend could replace the loop without touching algorithm code.
Both algorithms finish with a greedy merge over the collected summaries and
return the better of (best worker solution, merged solution).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (ObjectiveFamily, TwoStageSolution, empty_solution)
from .greedy import replacement_greedy
from .streaming import ThresholdManager


@dataclass(frozen=True)
class PartitionPlan:
    """Seeded uniform assignment of every element to one machine."""

    M: int
    seed: int
    assignment: tuple  # machine index per element id

    def machine_elements(self, l: int) -> list[int]:
        return [e for e, a in enumerate(self.assignment) if a == l]


@dataclass(frozen=True)
class WorkerOutput:
    """What one machine ships back to the coordinator."""

    machine: int
    solutions: tuple  # tuple of (tau, TwoStageSolution); tau None for greedy workers

    def to_jsonable(self) -> dict:
        return {
            "machine": self.machine,
            "solutions": [
                {"tau": tau,
                 "summary": sorted(sol.summary),
                 "per_function": [sorted(t) for t in sol.per_function],
                 "value": sol.value, "ell": sol.ell, "k": sol.k}
                for tau, sol in self.solutions
            ],
        }


def partition(ground_n: int, M: int, seed: int) -> PartitionPlan:
    """Uniform independent machine assignment, reproducible from the seed.

    The partition draws from its own derived RNG stream so later sources of
    randomness can be added without disturbing existing assignments.
    """
    if M < 1:
        raise ValueError("need at least one machine")
    stream = np.random.SeedSequence(seed).spawn(1)[0]
    rng = np.random.default_rng(stream)
    return PartitionPlan(M, seed,
                         tuple(int(a) for a in rng.integers(0, M, ground_n)))


def _better(a: TwoStageSolution, b: TwoStageSolution) -> TwoStageSolution:
    """b only wins strictly; ties keep the earlier candidate."""
    return b if b.value > a.value else a


def replacement_distributed(F: ObjectiveFamily, M: int, ell: int, k: int,
                            seed: int,
                            elements: Iterable[int] | None = None
                            ) -> TwoStageSolution:
    """Greedy workers over a random split, then a greedy merge of their summaries."""
    ids = sorted(set(elements)) if elements is not None else list(F.ground.elements())
    plan = partition(F.ground.n, M, seed)
    best_worker = empty_solution(F.m, ell, k)
    worker_summaries: set[int] = set()
    for l in range(M):
        part = [e for e in ids if plan.assignment[e] == l]
        if not part:
            continue
        sol = replacement_greedy(F, part, ell, k)
        worker_summaries.update(sol.summary)
        best_worker = _better(best_worker, sol)
    if not worker_summaries:
        return best_worker
    merged = replacement_greedy(F, sorted(worker_summaries), ell, k)
    return _better(best_worker, merged)


def pseudo_streaming(part: Iterable[int], F: ObjectiveFamily, epsilon: float,
                     ell: int, k: int, alpha: float = 1.0,
                     beta: float | None = None,
                     machine: int = 0) -> WorkerOutput:
    """Streaming over a canonically sorted order, returning every surviving instance.

    Sorting by element id makes the output a function of the input *set*,
    which the merge-consistency argument of the fast algorithm needs.
    """
    ordered = sorted(set(part))
    mgr = ThresholdManager(F, epsilon, ell, k, alpha=alpha, beta=beta)
    mgr.run(ordered)
    return WorkerOutput(machine, tuple(mgr.all_solutions()))


def distributed_fast(F: ObjectiveFamily, M: int, epsilon: float, ell: int,
                     k: int, seed: int, alpha: float = 1.0,
                     beta: float | None = None,
                     elements: Iterable[int] | None = None
                     ) -> TwoStageSolution:
    """Pseudo-streaming workers, then a greedy merge over all kept summaries."""
    ids = sorted(set(elements)) if elements is not None else list(F.ground.elements())
    plan = partition(F.ground.n, M, seed)
    best_instance = empty_solution(F.m, ell, k)
    merged_candidates: set[int] = set()
    for l in range(M):
        part = [e for e in ids if plan.assignment[e] == l]
        if not part:
            continue
        out = pseudo_streaming(part, F, epsilon, ell, k,
                               alpha=alpha, beta=beta, machine=l)
        for _, sol in out.solutions:
            merged_candidates.update(sol.summary)
            best_instance = _better(best_instance, sol)
    if not merged_candidates:
        return best_instance
    merged = replacement_greedy(F, sorted(merged_candidates), ell, k)
    return _better(best_instance, merged)


def recommend_machine_count(n: int, ell: int, variant: str) -> int:
    """Machine counts minimizing total work for each distributed variant."""
    if n < 1 or ell < 1:
        raise ValueError("n and ell must be at least 1")
    if variant == "distributed":
        return max(1, int((n / ell) ** 0.5 + 0.5))
    if variant == "fast":
        return max(1, int(n ** 0.5 / ell + 0.5))
    raise ValueError(f"unknown variant {variant!r}")
