"""Ground set, evaluation-counted objective families, and the gain primitives.

Every solver in this package is built from four quantities computed for a
candidate element ``x`` against a partial solution ``A``:

* the plain marginal gain ``f(A + x) - f(A)``,
* the best-swap gain (which element of ``A`` should ``x`` replace, and what
  is that worth),
* the thresholded streaming gain (swap/insertion gain, zeroed when it does
  not clear a fraction of the current value), and
* the greedy additive gain (insertion gain below budget, clamped swap gain
  at budget).

All of them live here so the algorithm modules stay small.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence


class InvariantViolation(AssertionError):
    """An instrumented run observed a state that should be impossible."""


@dataclass(frozen=True)
class GroundSet:
    """The n selectable elements plus opaque per-element payload.

    Elements are dense integer ids ``0..n-1``.  ``payload`` is whatever the
    objective implementations need (points, feature vectors, nothing).
    """

    n: int
    payload: Sequence = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set must contain at least one element")

    def elements(self) -> range:
        return range(self.n)


class ObjectiveFamily:
    """An ordered family of m monotone submodular functions over one ground set.

    Functions are normalized at construction so that every member evaluates
    to exactly 0 on the empty set.  Every set evaluation increments ``evals``;
    the complexity regression tests depend on that count being deterministic
    for a fixed code path.
    """

    def __init__(self, ground: GroundSet,
                 functions: Sequence[Callable[[tuple], float]]):
        if len(functions) < 1:
            raise ValueError("need at least one function")
        self.ground = ground
        self._functions = list(functions)
        self.evals = 0
        self._offsets = [0.0] * len(self._functions)
        self._offsets = [self._raw(i, ()) for i in range(len(self._functions))]

    @property
    def m(self) -> int:
        return len(self._functions)

    def _raw(self, i: int, ids: tuple) -> float:
        self.evals += 1
        return float(self._functions[i](ids))

    def value(self, i: int, ids: Iterable[int]) -> float:
        """Normalized value of f_i on the given element set (one counted eval)."""
        if not 0 <= i < self.m:
            raise ValueError(f"function index {i} out of range [0, {self.m})")
        key = tuple(sorted(ids))
        if key and not (0 <= key[0] and key[-1] < self.ground.n):
            raise ValueError("element id out of range")
        return self._raw(i, key) - self._offsets[i]

    def singleton_average(self, u: int) -> float:
        """(1/m) sum_i f_i({u}); the quantity the streaming threshold tracker maximizes."""
        return sum(self.value(i, (u,)) for i in range(self.m)) / self.m


@dataclass(frozen=True)
class SwapOutcome:
    """Result of probing one candidate move: what got replaced and what it gained.

    ``replaced`` is None for pure insertions and for rejected moves.
    """

    replaced: Optional[int]
    gain: float


@dataclass
class TwoStageSolution:
    """A summary set plus the per-function solutions chosen from it."""

    summary: frozenset
    per_function: tuple  # tuple of frozensets, one per function
    value: float
    ell: int
    k: int

    def check(self):
        if len(self.summary) > self.ell:
            raise ValueError("summary exceeds its budget")
        for t in self.per_function:
            if len(t) > self.k:
                raise ValueError("per-function solution exceeds its budget")
            if not t <= self.summary:
                raise ValueError("per-function solution not contained in summary")


def empty_solution(m: int, ell: int, k: int) -> TwoStageSolution:
    return TwoStageSolution(frozenset(), tuple(frozenset() for _ in range(m)),
                            0.0, ell, k)


def solution_from_sets(F: ObjectiveFamily, summary, per_function,
                       ell: int, k: int) -> TwoStageSolution:
    """Build a solution with a freshly recomputed value."""
    sets = tuple(frozenset(t) for t in per_function)
    value = sum(F.value(i, t) for i, t in enumerate(sets)) / F.m
    sol = TwoStageSolution(frozenset(summary), sets, value, ell, k)
    sol.check()
    return sol


def _check_element(F: ObjectiveFamily, x: int):
    if not 0 <= x < F.ground.n:
        raise ValueError(f"element {x} out of range [0, {F.ground.n})")


def marginal(F: ObjectiveFamily, i: int, x: int, A: Iterable[int],
             base: float | None = None) -> float:
    """f_i(A + x) - f_i(A); exactly 0 when x is already in A.

    ``base`` lets callers reuse a cached f_i(A) instead of re-evaluating.
    """
    _check_element(F, x)
    A = set(A)
    if x in A:
        return 0.0
    if base is None:
        base = F.value(i, A)
    return F.value(i, A | {x}) - base


def rep(F: ObjectiveFamily, i: int, x: int, A: Iterable[int],
        base: float | None = None) -> SwapOutcome:
    """Best single swap of x into A: argmax_{y in A} f_i(A + x - y) - f_i(A).

    The gain may be negative.  Ties break toward the lowest replaced id.
    """
    _check_element(F, x)
    A = set(A)
    if not A:
        raise ValueError("rep requires a non-empty set; use the insertion path")
    if x in A:
        raise ValueError("candidate already in the set")
    if base is None:
        base = F.value(i, A)
    best_y = None
    best_gain = None
    for y in sorted(A):
        gain = F.value(i, (A - {y}) | {x}) - base
        if best_gain is None or gain > best_gain:
            best_gain = gain
            best_y = y
    return SwapOutcome(best_y, best_gain)


def nabla(F: ObjectiveFamily, i: int, x: int, A: Iterable[int],
          alpha: float, k: int, base: float | None = None) -> SwapOutcome:
    """Thresholded streaming gain of x against A.

    Below budget the insertion gain counts only if it reaches
    (alpha/k) * f_i(A); at budget the best-swap gain must clear the same
    bar.  Anything below the bar contributes 0.  The returned gain is
    always >= 0; ``replaced`` is set only for an accepted swap.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    A = set(A)
    if len(A) > k:
        raise InvariantViolation("per-function solution larger than its budget")
    if base is None:
        base = F.value(i, A)
    threshold = (alpha / k) * base
    if len(A) < k:
        g = marginal(F, i, x, A, base=base)
        if g >= threshold:
            return SwapOutcome(None, g)
        return SwapOutcome(None, 0.0)
    out = rep(F, i, x, A, base=base)
    if out.gain >= threshold and out.gain > 0:
        return out
    return SwapOutcome(None, 0.0)


def lambda_gain(F: ObjectiveFamily, i: int, x: int, A: Iterable[int],
                k: int, base: float | None = None) -> SwapOutcome:
    """Greedy additive gain of x against A.

    Plain insertion gain below budget; at budget, the best-swap gain clamped
    at 0.  A zero-gain swap is reported with ``replaced`` unset so callers
    treat it as a no-op.
    """
    A = set(A)
    if len(A) > k:
        raise InvariantViolation("per-function solution larger than its budget")
    if base is None:
        base = F.value(i, A)
    if len(A) < k:
        return SwapOutcome(None, marginal(F, i, x, A, base=base))
    out = rep(F, i, x, A, base=base)
    if out.gain > 0:
        return out
    return SwapOutcome(None, 0.0)


def evaluate_solution(F: ObjectiveFamily, sol: TwoStageSolution) -> float:
    """(1/m) sum_i f_i(T_i), recomputed from scratch."""
    for t in sol.per_function:
        if not t <= sol.summary:
            raise ValueError("per-function solution not contained in summary")
    return sum(F.value(i, t) for i, t in enumerate(sol.per_function)) / F.m
