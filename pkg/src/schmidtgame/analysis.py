"""Finite-scale geometry of point sets and interval unions.

Everything here is a statement about finitely many scales: covering counts,
log-log slopes over a declared scale range and localized covering ratios.
None of it claims to compute a true (asymptotic) dimension.

Covering numbers use sets of diameter at most ``r`` in the max metric. In one
dimension the greedy sweep is exact; in higher dimension we return a bracket
(greedy packing below, grid cells above).
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .arenas import PointSet
from .digits import DyadicInterval
from .errors import ConfigurationError, InvariantViolation
from .geometry import box_distance, greedy_separated
from .rational import as_rational, exact_log2, format_rational, log2

MAX_INTERVALS = 10**6


# --- covering numbers --------------------------------------------------------


@dataclass(frozen=True)
class CoveringBracket:
    """Bounds on a covering number that is too costly to compute exactly."""

    lower: int
    upper: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvariantViolation(f"covering bracket [{self.lower}, {self.upper}] is empty")


def as_points(points) -> list:
    """Normalize a PointSet, scalars or coordinate sequences to Fraction tuples."""
    if isinstance(points, PointSet):
        return list(points.points)
    out = []
    for p in points:
        if isinstance(p, tuple) and all(type(c) is Fraction for c in p):
            out.append(p)
        elif isinstance(p, (Fraction, int, str)):
            out.append((as_rational(p),))
        else:
            out.append(tuple(as_rational(c) for c in p))
    if out and len({len(p) for p in out}) != 1:
        raise ConfigurationError("points must share one dimension")
    return out


def restrict(points: Sequence[tuple], region) -> list:
    """Points inside the closed ball ``region = (x, R)``; None means all."""
    if region is None:
        return list(points)
    x, R = region
    x = tuple(as_rational(c) for c in (x if isinstance(x, (tuple, list)) else (x,)))
    R = as_rational(R)
    return [p for p in points if box_distance(p, x) <= R]


def sweep_cover_1d(xs: Sequence, r) -> int:
    """Minimal number of diameter-r sets covering sorted reals ``xs``."""
    count = 0
    i, n = 0, len(xs)
    while i < n:
        count += 1
        i = bisect_right(xs, xs[i] + r, i)
    return count


class LineIndex:
    """Sorted 1-D points scaled to integers over a common denominator.

    Integer comparisons are exact and far cheaper than Fraction ones, which
    matters when thousands of ball counts are taken on one set.
    """

    def __init__(self, xs: Iterable[Fraction]):
        xs = sorted(set(xs))
        unit = 1
        for x in xs:
            unit = math.lcm(unit, x.denominator)
        self.unit = unit
        self.ints = [x.numerator * (unit // x.denominator) for x in xs]

    def __len__(self):
        return len(self.ints)

    def count(self, x: Fraction, R: Fraction, r: Fraction) -> int:
        """N_r of the points in the closed ball B(x, R)."""
        u = self.unit
        lo = bisect_left(self.ints, math.ceil((x - R) * u))
        hi = bisect_right(self.ints, math.floor((x + R) * u))
        return sweep_cover_1d(self.ints[lo:hi], math.floor(r * u))

    def count_all(self, r: Fraction) -> int:
        return sweep_cover_1d(self.ints, math.floor(r * self.unit))


def grid_cover(points: Sequence[tuple], r: Fraction) -> int:
    return len({tuple(math.floor(c / r) for c in p) for p in points})


def packing_count(points: Sequence[tuple], r: Fraction) -> int:
    return len(greedy_separated(sorted(points), r))


def covering_number(points, r, region=None):
    """N_r of the (optionally ball-restricted) point set.

    Returns an int in dimension one and a CoveringBracket otherwise. An empty
    restriction counts 0.
    """
    r = as_rational(r)
    if r <= 0:
        raise ConfigurationError("covering scale must be positive")
    pts = as_points(points)
    if pts and len(pts[0]) == 1:
        index = LineIndex(p[0] for p in pts)
        if region is None:
            return index.count_all(r)
        x, R = region
        x = as_rational(x[0] if isinstance(x, (tuple, list)) else x)
        return index.count(x, as_rational(R), r)
    pts = restrict(pts, region)
    if not pts:
        return 0
    return CoveringBracket(packing_count(pts, r), grid_cover(pts, r))


def _bounds(count) -> tuple:
    if isinstance(count, CoveringBracket):
        return count.lower, count.upper
    return count, count


@dataclass(frozen=True)
class CoveringProfile:
    """Rows (r, lower, upper), scales strictly decreasing; lower == upper in 1-D."""

    rows: tuple
    region: Optional[tuple] = None

    def __post_init__(self):
        rs = [row[0] for row in self.rows]
        if any(a <= b for a, b in zip(rs, rs[1:])):
            raise ConfigurationError("profile scales must be strictly decreasing")

    @property
    def scales(self) -> list:
        return [row[0] for row in self.rows]

    @property
    def counts(self) -> list:
        return [row[2] for row in self.rows]

    @property
    def lower_counts(self) -> list:
        return [row[1] for row in self.rows]

    def is_monotone(self) -> bool:
        return all(a[1] <= b[1] and a[2] <= b[2] for a, b in zip(self.rows, self.rows[1:]))

    def as_dict(self):
        out = {
            "rows": [{"r": format_rational(r), "lower": lo, "upper": hi} for r, lo, hi in self.rows],
        }
        if self.region is not None:
            x, R = self.region
            out["region"] = {"x": [format_rational(c) for c in x], "R": format_rational(R)}
        return out


def covering_profile(points, scales: Iterable, region=None) -> CoveringProfile:
    pts = restrict(as_points(points), region)
    rows = []
    for r in sorted({as_rational(s) for s in scales}, reverse=True):
        lo, hi = _bounds(covering_number(pts, r))
        rows.append((r, lo, hi))
    if region is not None:
        x, R = region
        x = tuple(as_rational(c) for c in (x if isinstance(x, (tuple, list)) else (x,)))
        region = (x, as_rational(R))
    return CoveringProfile(tuple(rows), region)


def dyadic_scales(first: int, last: int) -> list:
    """[2^-first, ..., 2^-last]."""
    if first > last:
        raise ConfigurationError("empty dyadic scale range")
    return [Fraction(1, 2**k) for k in range(first, last + 1)]


# --- slopes ------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeReport:
    slope: object
    exact: bool
    scales: tuple
    counts: tuple
    quotients: tuple

    @property
    def lower_box(self):
        return min(self.quotients) if self.quotients else None

    @property
    def upper_box(self):
        return max(self.quotients) if self.quotients else None

    def as_dict(self):
        fmt = format_rational if self.exact else float
        return {
            "slope": fmt(self.slope),
            "exact": self.exact,
            "scales": [format_rational(r) for r in self.scales],
            "counts": list(self.counts),
            "quotients": [fmt(q) for q in self.quotients],
            "lower_box": fmt(self.lower_box) if self.quotients else None,
            "upper_box": fmt(self.upper_box) if self.quotients else None,
        }


def default_fit_rows(n: int) -> range:
    """Middle half of n rows (at least two)."""
    if n < 2:
        raise ConfigurationError("need at least two profile rows")
    lo, hi = n // 4, n - n // 4
    if hi - lo < 2:
        lo, hi = 0, n
    return range(lo, hi)


def dimension_slope(profile: CoveringProfile, fit_range=None, use: str = "upper") -> SlopeReport:
    """Least-squares slope of log2 N_r against -log2 r.

    ``fit_range`` is ``(r_max, r_min)``; rows with r_min <= r <= r_max are
    used. Without it the middle half of the rows is fitted. When every scale
    and count is a power of two the slope is an exact Fraction.
    """
    col = 2 if use == "upper" else 1
    rows = list(profile.rows)
    if fit_range is None:
        rows = [rows[i] for i in default_fit_rows(len(rows))]
    else:
        hi, lo = (as_rational(v) for v in fit_range)
        rows = [row for row in rows if lo <= row[0] <= hi]
    rows = [row for row in rows if row[col] > 0]
    if len(rows) < 2:
        raise ConfigurationError("degenerate fit range: fewer than two nonempty rows")
    xs_exact = [exact_log2(row[0]) for row in rows]
    ys_exact = [exact_log2(Fraction(row[col])) for row in rows]
    exact = all(v is not None for v in xs_exact + ys_exact)
    if exact:
        xs = [Fraction(-v) for v in xs_exact]
        ys = [Fraction(v) for v in ys_exact]
    else:
        xs = [-log2(row[0]) for row in rows]
        ys = [log2(row[col]) for row in rows]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ConfigurationError("degenerate fit range: all scales equal")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    quotients = tuple(y / x for x, y in zip(xs, ys) if x > 0)
    return SlopeReport(slope, exact, tuple(r[0] for r in rows), tuple(r[col] for r in rows), quotients)


# --- localized ratios ----------------------------------------------------------


@dataclass(frozen=True)
class LocalRatioReport:
    assouad: float
    lower: float
    assouad_witness: tuple
    lower_witness: tuple
    samples: int

    def as_dict(self):
        def wit(w):
            x, R, r = w
            return {"x": [format_rational(c) for c in x], "R": format_rational(R), "r": format_rational(r)}

        return {
            "assouad_proxy": self.assouad,
            "lower_proxy": self.lower,
            "assouad_witness": wit(self.assouad_witness),
            "lower_witness": wit(self.lower_witness),
            "samples": self.samples,
        }


class BallCounter:
    """Covering counts of B(x,R) at scale r, with a sorted index in 1-D."""

    def __init__(self, pts: list):
        self.pts = pts
        self.dim = len(pts[0])
        if self.dim == 1:
            self.index = LineIndex(p[0] for p in pts)

    def count(self, x: tuple, R: Fraction, r: Fraction) -> tuple:
        if self.dim == 1:
            n = self.index.count(x[0], R, r)
            return n, n
        return _bounds(covering_number(self.pts, r, (x, R)))


def localized_ratio_extrema(points, pairs: Iterable, centers=None, max_centers: int = 200, seed: int = 0) -> LocalRatioReport:
    """Extremes of log N_r(B(x,R) cap K) / log(R/r) over centers and scale pairs.

    The maximum is a finite-scale Assouad proxy and the minimum a
    finite-scale lower-dimension proxy. Centers default to the points
    themselves, subsampled deterministically beyond ``max_centers``. In
    dimension >= 2 the Assouad side uses the grid upper count and the lower
    side the packing count, so both proxies err on the conservative side.
    """
    pts = as_points(points)
    if not pts:
        raise ConfigurationError("no points to sample")
    pairs = [(as_rational(R), as_rational(r)) for R, r in pairs]
    for R, r in pairs:
        if not R > r > 0:
            raise ConfigurationError(f"scale pair needs R > r > 0, got ({R}, {r})")
    if not pairs:
        raise ConfigurationError("no scale pairs given")
    if centers is None:
        centers = sorted(pts)
        if len(centers) > max_centers:
            centers = sorted(random.Random(f"centers:{seed}").sample(centers, max_centers))
    else:
        centers = as_points(centers)
    counter = BallCounter(pts)
    hi_q = lo_q = None
    hi_w = lo_w = None
    samples = 0
    for x in centers:
        for R, r in pairs:
            lo_n, hi_n = counter.count(x, R, r)
            if hi_n == 0:
                continue
            samples += 1
            scale = log2(R / r)
            q_hi = log2(hi_n) / scale
            q_lo = log2(lo_n) / scale
            if hi_q is None or q_hi > hi_q:
                hi_q, hi_w = q_hi, (x, R, r)
            if lo_q is None or q_lo < lo_q:
                lo_q, lo_w = q_lo, (x, R, r)
    if samples == 0:
        raise ConfigurationError("no valid samples: every sampled ball was empty")
    return LocalRatioReport(hi_q, lo_q, hi_w, lo_w, samples)


# --- Moran sets --------------------------------------------------------------


@dataclass(frozen=True)
class MoranSet:
    """Level-k intervals: a 0 digit keeps both halves, a 1 digit keeps the left half."""

    digits: str
    depth: int

    @property
    def zeros(self) -> int:
        return self.digits[: self.depth].count("0")

    @property
    def count(self) -> int:
        return 2**self.zeros

    @property
    def slope(self) -> Fraction:
        if self.depth == 0:
            raise ConfigurationError("slope needs depth >= 1")
        return Fraction(self.zeros, self.depth)

    def intervals(self) -> Iterator[DyadicInterval]:
        """Generate the level-``depth`` intervals left to right."""
        free = [self.depth - i for i, ch in enumerate(self.digits[: self.depth], start=1) if ch == "0"]
        # index bits: position i (1-based) contributes 2**(depth - i) when free
        for mask in range(self.count):
            index = 0
            for j, shift in enumerate(reversed(free)):
                if mask >> j & 1:
                    index |= 1 << shift
            yield DyadicInterval(self.depth, index)

    def profile(self, levels: Optional[Iterable[int]] = None) -> CoveringProfile:
        """Counts 2^(zeros among the first i digits) at scale 2^-i."""
        levels = range(1, self.depth + 1) if levels is None else levels
        rows = []
        for i in sorted(set(levels)):
            if not 1 <= i <= self.depth:
                raise ConfigurationError(f"level {i} outside 1..{self.depth}")
            c = 2 ** self.digits[:i].count("0")
            rows.append((Fraction(1, 2**i), c, c))
        return CoveringProfile(tuple(rows))


def moran_set_from_digits(digits: str, depth: int) -> MoranSet:
    if any(ch not in "01" for ch in digits):
        raise ConfigurationError(f"digits must be binary, got {digits!r}")
    if depth < 0 or len(digits) < depth:
        raise ConfigurationError(f"need at least {depth} digits, got {len(digits)}")
    return MoranSet(digits, depth)


# --- porous sets ---------------------------------------------------------------


def porosity_constant(alpha, beta) -> Fraction:
    alpha, beta = as_rational(alpha), as_rational(beta)
    return alpha * beta * (Fraction(1, 2) - 2 * alpha)


class PorousSet:
    """Intersection over n = 1..depth of B((r_n/2)Z cap [0,1], alpha r_n), r_n = (alpha beta)^n.

    Intervals are produced on demand for a window, so local questions never
    build the whole union.
    """

    def __init__(self, alpha, beta, depth: int, max_intervals: int = MAX_INTERVALS):
        self.alpha, self.beta = as_rational(alpha), as_rational(beta)
        if not 0 < self.alpha < Fraction(1, 4):
            raise ConfigurationError(f"porous set needs 0 < alpha < 1/4, got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ConfigurationError(f"porous set needs 0 < beta < 1, got {self.beta}")
        if depth < 1:
            raise ConfigurationError("depth must be >= 1")
        self.depth = depth
        self.max_intervals = max_intervals

    def radius(self, n: int) -> Fraction:
        return (self.alpha * self.beta) ** n

    @property
    def epsilon(self) -> Fraction:
        return porosity_constant(self.alpha, self.beta)

    def _level_hits(self, n: int, a: Fraction, b: Fraction) -> Iterator[tuple]:
        r = self.radius(n)
        half, rad = r / 2, self.alpha * r
        k_lo = max(0, math.ceil((a - rad) / half))
        k_hi = min(math.floor(1 / half), math.floor((b + rad) / half))
        for k in range(k_lo, k_hi + 1):
            c = k * half
            lo, hi = max(a, c - rad), min(b, c + rad)
            if lo <= hi:
                yield lo, hi

    def _refine(self, pieces: Iterable[tuple], n: int) -> list:
        out = []
        for a, b in pieces:
            out.extend(self._level_hits(n, a, b))
        return out

    def window(self, lo, hi, depth: Optional[int] = None) -> list:
        """Intervals of the level-``depth`` set clipped to [lo, hi]."""
        lo, hi = as_rational(lo), as_rational(hi)
        depth = self.depth if depth is None else depth
        pieces = list(self._level_hits(1, lo, hi))
        for n in range(2, depth + 1):
            pieces = self._refine(pieces, n)
        return pieces

    def intervals(self) -> list:
        """The whole union as a sorted disjoint list; refuses above the cap.

        Works in integer multiples of a common unit, which is much faster
        than Fractions at a million intervals.
        """
        dens = [self.radius(n) / 2 for n in range(1, self.depth + 1)]
        dens += [self.alpha * self.radius(n) for n in range(1, self.depth + 1)]
        unit = 1
        for v in dens:
            unit = math.lcm(unit, v.denominator)
        half = [int(self.radius(n) / 2 * unit) for n in range(self.depth + 1)]
        rad = [int(self.alpha * self.radius(n) * unit) for n in range(self.depth + 1)]
        top = unit

        def hits(n, a, b):
            k_lo = max(0, -((rad[n] - a) // half[n]))
            k_hi = min(top // half[n], (b + rad[n]) // half[n])
            for k in range(k_lo, k_hi + 1):
                c = k * half[n]
                lo, hi = max(a, c - rad[n]), min(b, c + rad[n])
                if lo <= hi:
                    yield lo, hi

        pieces = list(hits(1, -unit, 2 * unit))
        for n in range(2, self.depth + 1):
            out = []
            for a, b in pieces:
                out.extend(hits(n, a, b))
                if len(out) > self.max_intervals:
                    raise ConfigurationError(
                        f"depth {self.depth} exceeds {self.max_intervals} intervals; admissible depth is {n - 1}"
                    )
            pieces = out
        return [(Fraction(a, unit), Fraction(b, unit)) for a, b in pieces]

    def meets_open(self, lo: Fraction, hi: Fraction) -> bool:
        """Whether the set meets the open interval (lo, hi)."""
        return any(a < hi and b > lo for a, b in self.window(lo, hi))

    def level_for(self, r: Fraction) -> int:
        """n with r_n <= r < r_{n-1}."""
        n = 1
        while self.radius(n) > r:
            n += 1
        return n


def build_porous_set(alpha, beta, depth: int, max_intervals: int = MAX_INTERVALS) -> PorousSet:
    return PorousSet(alpha, beta, depth, max_intervals)


@dataclass(frozen=True)
class PorosityWitness:
    """Open hole B(y, rho) inside the closed query ball B(x, r) that misses the set."""

    x: Fraction
    r: Fraction
    y: Fraction
    rho: Fraction
    level: int

    def ratio(self) -> Fraction:
        return self.rho / self.r

    def check(self, F: PorousSet) -> list:
        problems = []
        if not (self.x - self.r <= self.y - self.rho and self.y + self.rho <= self.x + self.r):
            problems.append("hole leaves the query ball")
        if F.meets_open(self.y - self.rho, self.y + self.rho):
            problems.append("hole meets the set")
        return problems

    def as_dict(self):
        return {
            "x": format_rational(self.x),
            "r": format_rational(self.r),
            "y": format_rational(self.y),
            "hole_radius": format_rational(self.rho),
            "level": self.level,
        }


def porous_witness(F: PorousSet, x, r, alpha=None, beta=None) -> PorosityWitness:
    """Largest gap of the level-n approximation inside B(x,r) cap [0,1].

    n is the level with r_n <= r < r_{n-1}; r ranges over [r_depth, 1/2]. Gaps of a coarser approximation
    are gaps of F, so the hole misses F; ties go to the leftmost gap. Raises
    InvariantViolation if the hole is smaller than epsilon * r.
    """
    x, r = as_rational(x), as_rational(r)
    if alpha is not None and as_rational(alpha) != F.alpha or beta is not None and as_rational(beta) != F.beta:
        raise ConfigurationError("alpha/beta do not match the porous set")
    if not 0 <= x <= 1:
        raise ConfigurationError(f"query point {x} outside [0,1]")
    # beyond 1/2 even the widest gaps (length r_1(1/2 - 2 alpha)) are shorter than 2 epsilon r
    if not F.radius(F.depth) <= r <= Fraction(1, 2):
        raise ConfigurationError(f"query radius must lie in [r_depth, 1/2] = [{F.radius(F.depth)}, 1/2], got {r}")
    n = F.level_for(r)
    lo, hi = max(Fraction(0), x - r), min(Fraction(1), x + r)
    pieces = sorted(F.window(lo, hi, n))
    best = None
    cursor = lo
    for a, b in pieces + [(hi, hi)]:
        a_c = min(a, hi)
        if a_c > cursor and (best is None or a_c - cursor > best[1] - best[0]):
            best = (cursor, a_c)
        cursor = max(cursor, b)
        if cursor >= hi:
            break
    if best is None:
        raise InvariantViolation(f"no gap of the set inside B({x}, {r})")
    y, rho = (best[0] + best[1]) / 2, (best[1] - best[0]) / 2
    witness = PorosityWitness(x, r, y, rho, n)
    if rho < F.epsilon * r:
        raise InvariantViolation(f"largest hole radius {rho} is below epsilon*r = {F.epsilon * r} at x={x}, r={r}")
    return witness
