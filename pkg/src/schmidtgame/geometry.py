"""Exact max-metric helpers shared by the arenas and the analysis code."""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Sequence


def box_distance(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    if len(p) != len(q):
        raise ValueError("dimension mismatch")
    return max(abs(a - b) for a, b in zip(p, q))


class GridIndex:
    """Bucket points into cubes of side ``cell`` for exact radius queries.

    A query of radius <= cell only has to inspect the 3**d neighbouring cubes.
    """

    def __init__(self, cell: Fraction, points: Iterable[tuple] = ()):
        if cell <= 0:
            raise ValueError("cell size must be positive")
        self.cell = Fraction(cell)
        self.buckets: dict = {}
        for i, p in enumerate(points):
            self.add(p, i)

    def key(self, p) -> tuple:
        return tuple(math.floor(c / self.cell) for c in p)

    def add(self, p, tag=None) -> None:
        self.buckets.setdefault(self.key(p), []).append((p, tag))

    def near(self, p, radius: Fraction):
        """Yield (point, tag) with max-distance <= radius (radius <= cell)."""
        if radius > self.cell:
            raise ValueError("query radius exceeds the cell size")
        k = self.key(p)
        for offset in itertools.product((-1, 0, 1), repeat=len(k)):
            bucket = self.buckets.get(tuple(a + b for a, b in zip(k, offset)))
            if not bucket:
                continue
            for q, tag in bucket:
                if box_distance(p, q) <= radius:
                    yield q, tag

    def any_within(self, p, radius: Fraction) -> bool:
        return next(self.near(p, radius), None) is not None


def all_pairs_farther_than(points: Sequence[tuple], sep: Fraction, strict: bool = True) -> tuple | None:
    """Return a pair at distance <= ``sep`` (< ``sep`` when not strict), or None."""

    def bad(dist):
        return dist <= sep if strict else dist < sep

    if sep <= 0:
        seen = set()
        for p in points:
            if p in seen:
                return (p, p)
            seen.add(p)
        return None
    if points and len(points[0]) == 1:
        xs = sorted(points)
        for a, b in zip(xs, xs[1:]):
            if bad(b[0] - a[0]):
                return (a, b)
        return None
    grid = GridIndex(sep)
    for p in points:
        for q, _ in grid.near(p, sep):
            if bad(box_distance(p, q)):
                return (q, p)
        grid.add(p)
    return None


def greedy_separated(candidates: Iterable[tuple], sep: Fraction, grid: GridIndex | None = None) -> list:
    """Keep each candidate, in order, unless a kept point lies within ``sep``."""
    grid = grid if grid is not None else GridIndex(sep)
    kept = []
    for p in candidates:
        if not grid.any_within(p, sep):
            grid.add(p)
            kept.append(p)
    return kept


def nearest_distance_1d(sorted_xs: Sequence[Fraction], x: Fraction) -> Fraction:
    i = bisect_left(sorted_xs, x)
    best = None
    if i < len(sorted_xs):
        best = sorted_xs[i] - x
    if i > 0:
        d = x - sorted_xs[i - 1]
        if best is None or d < best:
            best = d
    return best
