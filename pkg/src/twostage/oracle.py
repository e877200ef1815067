"""Exhaustive brute-force solver: the ground truth for approximation tests.

Enumerates every summary of size <= ell and, inside each, every
per-function subset of size <= k.  Deliberately refuses instances whose
evaluation count would exceed a work budget instead of silently
approximating.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .core import ObjectiveFamily

DEFAULT_BUDGET = 10 ** 8


class OracleBudgetError(RuntimeError):
    """The requested instance needs more evaluations than the oracle allows."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    summary: tuple
    per_function: tuple  # tuple of tuples, one per function


def estimate_work(n: int, ell: int, k: int, m: int) -> int:
    """Number of set evaluations a full enumeration would perform."""
    total = 0
    for s in range(ell + 1):
        outer = comb(n, s)
        inner = m * sum(comb(s, t) for t in range(1, min(k, s) + 1))
        total += outer * inner
    return total


def brute_force_opt(F: ObjectiveFamily, elements: Iterable[int] | None,
                    ell: int, k: int,
                    max_evaluations: int = DEFAULT_BUDGET) -> OracleResult:
    """Exact optimum over all feasible (summary, per-function) choices.

    Ties go to the first maximizer in the enumeration order (summaries by
    size then lexicographically), so results are deterministic.
    """
    if ell < 1 or k < 1:
        raise ValueError("budgets must be at least 1")
    ids: Sequence[int] = (sorted(set(elements)) if elements is not None
                          else list(F.ground.elements()))
    work = estimate_work(len(ids), ell, k, F.m)
    if work > max_evaluations:
        raise OracleBudgetError(
            f"instance needs ~{work} evaluations, above the budget of "
            f"{max_evaluations}; refusing rather than approximating")

    m = F.m
    best_value = float("-inf")
    best_summary = ()
    best_per_function = tuple(() for _ in range(m))
    for s in range(ell + 1):
        for summary in combinations(ids, s):
            total = 0.0
            chosen = []
            for i in range(m):
                fbest = 0.0  # empty set is always feasible and worth 0
                tbest = ()
                for t in range(1, min(k, s) + 1):
                    for sub in combinations(summary, t):
                        v = F.value(i, sub)
                        if v > fbest:
                            fbest = v
                            tbest = sub
                total += fbest
                chosen.append(tbest)
            value = total / m
            if value > best_value:
                best_value = value
                best_summary = summary
                best_per_function = tuple(chosen)
    return OracleResult(best_value, best_summary, best_per_function)
