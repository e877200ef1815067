"""Concrete monotone submodular objective families.

Three families matter in practice:

* facility location over planar points (ride-share style), scored by a
  sigmoid "convenience" of Manhattan distance,
* exemplar clustering over per-class feature vectors (image-summary style),
* cheap synthetic generators (modular / coverage / facility) used throughout
  the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import GroundSet, ObjectiveFamily


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Region:
    """A demand region: the (subsampled) customer points one function cares about."""

    members: tuple  # tuple of Point
    center: Point | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("region must contain at least one point")


def manhattan(a: Point, b: Point) -> float:
    return abs(a.x - b.x) + abs(a.y - b.y)


def facility_convenience(a: Point, b: Point) -> float:
    """Sigmoid closeness score 2 - 2/(1 + exp(-200 d)) for Manhattan distance d.

    Written as 2z/(1+z) with z = exp(-200 d) so that distant pairs underflow
    cleanly to 0.0 instead of cancelling or producing NaN.
    """
    z = math.exp(-200.0 * manhattan(a, b))
    return 2.0 * z / (1.0 + z)


def facility_value(region: Region, candidates: Iterable[Point]) -> float:
    """Sum over region members of the best convenience to any candidate point."""
    pts = list(candidates)
    if not pts:
        return 0.0
    return sum(max(facility_convenience(a, b) for b in pts)
               for a in region.members)


def facility_family(points: Sequence[Point],
                    regions: Sequence[Region]) -> ObjectiveFamily:
    """Build one facility-location function per region over the given points.

    Convenience scores between every region member and every ground element
    are precomputed, so a set evaluation is a tiny max-then-sum.
    """
    ground = GroundSet(len(points), tuple(points))
    coords = np.asarray(points, dtype=float)
    matrices = []
    with np.errstate(under="ignore"):
        for region in regions:
            rc = np.asarray(region.members, dtype=float)
            d = np.abs(rc[:, None, :] - coords[None, :, :]).sum(axis=2)
            z = np.exp(-200.0 * d)
            matrices.append(2.0 * z / (1.0 + z))

    def make(mat):
        def f(ids: tuple) -> float:
            if not ids:
                return 0.0
            return float(mat[:, list(ids)].max(axis=1).sum())
        return f

    return ObjectiveFamily(ground, [make(mat) for mat in matrices])


def exemplar_value(members: np.ndarray, selected: np.ndarray) -> float:
    """Reduction in mean distance to the nearest exemplar, anchored at the zero vector.

    ``members`` holds the feature vectors of one class (rows); ``selected``
    the vectors chosen as exemplars for that class.  The phantom all-zero
    exemplar is always available, so an empty selection scores 0.
    """
    members = np.asarray(members, dtype=float)
    if members.ndim != 2 or members.shape[0] == 0:
        raise ValueError("class must contain at least one feature vector")
    anchor = np.linalg.norm(members, axis=1)
    if selected is None or len(selected) == 0:
        return 0.0
    selected = np.asarray(selected, dtype=float)
    dists = np.linalg.norm(members[:, None, :] - selected[None, :, :], axis=2)
    best = np.minimum(anchor, dists.min(axis=1))
    return float(anchor.mean() - best.mean())


def exemplar_family(vectors: np.ndarray, class_count: int) -> ObjectiveFamily:
    """One exemplar-clustering function per class with a nonempty member set.

    The function for class i only "sees" selected elements that themselves
    belong to class i; everything else is screened out before the distance
    minimum, which keeps the function normalized and total.
    """
    vectors = np.asarray(vectors, dtype=float)
    n = vectors.shape[0]
    ground = GroundSet(n, vectors)
    functions = []
    for i in range(class_count):
        omega = np.flatnonzero(vectors[:, i] > 0)
        if omega.size == 0:
            raise ValueError(f"class {i} has no members; cannot build its function")
        members = vectors[omega]
        anchor = np.linalg.norm(members, axis=1)
        # distances from class members to every ground element
        dmat = np.linalg.norm(members[:, None, :] - vectors[None, :, :], axis=2)
        in_class = set(int(e) for e in omega)

        def make(anchor, dmat, in_class):
            def f(ids: tuple) -> float:
                chosen = [e for e in ids if e in in_class]
                if not chosen:
                    return 0.0
                best = np.minimum(anchor, dmat[:, chosen].min(axis=1))
                return float(anchor.mean() - best.mean())
            return f

        functions.append(make(anchor, dmat, in_class))
    return ObjectiveFamily(ground, functions)


@dataclass(frozen=True)
class CoverageSpec:
    """Synthetic coverage instance: each element covers a bitmask of a finite universe."""

    masks: tuple  # one int bitmask per element
    universe: int

    def value(self, ids: tuple) -> float:
        acc = 0
        for e in ids:
            acc |= self.masks[e]
        return float(bin(acc).count("1"))


SYNTHETIC_KINDS = ("modular", "coverage", "facility")


def make_synthetic(kind: str, n: int, m: int, seed: int) -> ObjectiveFamily:
    """Deterministic random family of the requested kind."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    if kind not in SYNTHETIC_KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r}; "
                         f"expected one of {SYNTHETIC_KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "modular":
        weights = rng.uniform(0.0, 1.0, size=(m, n))
        ground = GroundSet(n, weights)

        def make(w):
            def f(ids: tuple) -> float:
                return float(sum(w[e] for e in ids))
            return f

        return ObjectiveFamily(ground, [make(weights[i]) for i in range(m)])

    if kind == "coverage":
        universe = max(16, 2 * n)
        specs = []
        for _ in range(m):
            hits = rng.random(size=(n, universe)) < 0.3
            masks = tuple(int("".join("1" if b else "0" for b in row), 2) if row.any() else 0
                          for row in hits)
            specs.append(CoverageSpec(masks, universe))
        ground = GroundSet(n, specs)
        return ObjectiveFamily(ground, [spec.value for spec in specs])

    # facility: points in a box small enough that the convenience kernel
    # actually discriminates (its length scale is 1/200 of a degree)
    coords = rng.uniform(0.0, 0.03, size=(n, 2))
    points = [Point(float(x), float(y)) for x, y in coords]
    cap = min(10, n)
    regions = []
    for _ in range(m):
        members = rng.choice(n, size=cap, replace=False)
        regions.append(Region(tuple(points[int(e)] for e in sorted(members))))
    return facility_family(points, regions)
