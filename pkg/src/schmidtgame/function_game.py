"""Alice's fat-image strategy on the Cantor-set function arena.

Alice keeps a family E_n of Cantor cylinders. Each round every x in E_n is
split into sub-cylinders, and N of them receive the values g(x) + r*S for a
fixed color set S. Whatever Bob replies, the images of E_n stay separated, so
the outcome's image contains a branching construction with N pieces per
scale factor alpha*beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arenas import CylinderFunction, cylinder_point
from .core import ALICE, Ball, GameParams, Strategy, Transcript, Turn, radius_schedule
from .errors import ConfigurationError, InvariantViolation
from .geometry import GridIndex, all_pairs_farther_than, box_distance
from .rational import format_rational

RADIUS = Fraction(1, 4)


@dataclass(frozen=True)
class ColorSet:
    points: tuple
    alpha: Fraction

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def separation(self) -> Fraction:
        return 5 * self.alpha

    def validate(self) -> None:
        if self.N < 2:
            raise InvariantViolation("a color set needs at least two points")
        for p in self.points:
            if max(abs(c) for c in p) > RADIUS:
                raise InvariantViolation(f"color {p} lies outside the ball of radius 1/4")
        pair = all_pairs_farther_than(self.points, self.separation, strict=False)
        if pair is not None:
            raise InvariantViolation(f"colors {pair} are closer than {self.separation}")


def build_color_set(alpha, d: int) -> ColorSet:
    """Grid -1/4 + i*5*alpha in [-1/4, 1/4]^d; (floor(1/(10 alpha)) + 1)^d points."""
    alpha = Fraction(alpha)
    if not 0 < alpha < Fraction(1, 8):
        raise ConfigurationError(f"the fat-image strategy needs 0 < alpha < 1/8, got {alpha}")
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    per_axis = math.floor(1 / (10 * alpha)) + 1
    if per_axis < 2:
        # for 1/10 < alpha < 1/8 a spacing of 5*alpha > 1/2 leaves one color
        raise ConfigurationError(f"alpha = {alpha} leaves a single color; branching needs alpha <= 1/10")
    axis = [-RADIUS + i * 5 * alpha for i in range(per_axis)]
    grid = [()]
    for _ in range(d):
        grid = [p + (c,) for p in grid for c in axis]
    cs = ColorSet(tuple(grid), alpha)
    cs.validate()
    return cs


def point_piece(f: CylinderFunction, word: str) -> str:
    """The partition word of ``f`` containing the Cantor point word + 000..."""
    piece = f.piece_of(word)
    if piece is not None:
        return piece
    for k in range(1, f.depth - len(word) + 1):
        candidate = word + "0" * k
        if candidate in f.values:
            return candidate
    raise InvariantViolation(f"no cylinder of the partition contains the point of {word!r}")


def point_value(f: CylinderFunction, word: str) -> tuple:
    return f.values[point_piece(f, word)]


def _isolate(values: dict, base: str) -> None:
    """Refine the partition in place so that ``base`` is one of its words."""
    for k in range(len(base), -1, -1):
        prefix = base[:k]
        if prefix in values:
            vec = values.pop(prefix)
            for j in range(k, len(base)):
                sibling = base[:j] + ("1" if base[j] == "0" else "0")
                values[sibling] = vec
            values[base] = vec
            return
    # base is already split into finer pieces: nothing to isolate
    raise InvariantViolation(f"cylinder {base!r} is not constant for the current function")


class FatImageStrategy(Strategy):
    """Alice's branching strategy; the state lives in the per-round metadata."""

    def __init__(self, params: Optional[GameParams] = None, d: int = 1):
        self.d = d
        self.colors = None
        if params is not None:
            self.colors = build_color_set(params.alpha, d)

    def reset(self, params, arena):
        if arena.tag != "function":
            raise ConfigurationError("the fat-image strategy plays on the function arena")
        if arena.dim != self.d:
            raise ConfigurationError(f"strategy built for dimension {self.d}, arena has {arena.dim}")
        self.colors = build_color_set(params.alpha, self.d)
        self.E = [""]

    def move(self, turn: Turn):
        if turn.role != ALICE:
            raise ConfigurationError("the fat-image strategy is Alice's")
        g = turn.previous.center
        r = turn.previous.radius
        params = turn.params
        n = turn.n
        if n >= 2:
            prev_r = radius_schedule(params, n - 2)
            _check_separated(g, self.E, 2 * params.alpha * prev_r, n)
        S = self.colors.points
        N = len(S)
        L = (N - 1).bit_length()
        values = dict(g.values)
        new_E, parents, colors = [], [], []
        for i, x in enumerate(self.E):
            piece = point_piece(g, x)
            base = piece if len(piece) >= len(x) else x
            gx = g.values[piece]
            if base != piece:
                _isolate(values, base)
            del values[base]
            for j in range(2**L):
                word = base + format(j, f"0{L}b")
                if j < N:
                    values[word] = tuple(a + r * c for a, c in zip(gx, S[j]))
                    new_E.append(word)
                    parents.append(i)
                    colors.append(j)
                else:
                    values[word] = gx
        f = CylinderFunction(values, check=False)
        self.E = new_E
        meta = {"E": new_E, "parents": parents, "colors": colors, "N": N}
        return Ball(f, turn.radius), meta


def fat_image_strategy(params: Optional[GameParams] = None, d: int = 1) -> FatImageStrategy:
    return FatImageStrategy(params, d)


def _image(f: CylinderFunction, words) -> list:
    return [point_value(f, w) for w in words]


def _check_separated(g, words, bound, n) -> None:
    pts = _image(g, words)
    pair = all_pairs_farther_than(pts, bound)
    if pair is not None:
        raise InvariantViolation(
            f"round {n}: images {pair} of distinct family points are within {bound}; separation invariant broken"
        )


@dataclass
class BranchingReport:
    N: int
    rounds: int
    cardinalities: list
    separation_bounds: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    final_count: int = 0
    final_scale: Fraction = Fraction(0)
    dimension_estimate: float = 0.0
    predicted: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self):
        return {
            "N": self.N,
            "rounds": self.rounds,
            "cardinalities": self.cardinalities,
            "separation_bounds": [format_rational(s) for s in self.separation_bounds],
            "failures": self.failures,
            "final_count": self.final_count,
            "final_scale": format_rational(self.final_scale),
            "dimension_estimate": self.dimension_estimate,
            "predicted": self.predicted,
            "pass": self.passed,
        }


def verify_branching(t: Transcript) -> BranchingReport:
    """Re-check the branching construction round by round from the transcript.

    Image balls are B(h_n(y), r_n) for y in E_n, where h_n is Bob's round-n
    function. They must be pairwise disjoint, nest in the parent's ball, and
    distinct families must stay alpha*r_{n-2}/4 apart.
    """
    from .analysis import covering_number

    params = t.params
    if not t.rounds:
        raise ConfigurationError("transcript has no rounds")
    N = t.rounds[0].alice_meta["N"]
    report = BranchingReport(N=N, rounds=len(t.rounds), cardinalities=[1])
    prev_words, prev_h = [""], t.initial.center
    for rnd in t.rounds:
        n = rnd.n
        meta = rnd.alice_meta
        words, parents = meta["E"], meta["parents"]
        h = rnd.bob.center
        r_n = rnd.bob.radius
        report.cardinalities.append(len(words))
        if len(words) != N**n:
            report.failures.append(f"round {n}: #E = {len(words)}, expected {N ** n}")
        ws = sorted(words)
        for a, b in zip(ws, ws[1:]):
            if b.startswith(a):
                report.failures.append(f"round {n}: cylinders {a!r} and {b!r} overlap")
                break
        imgs = _image(h, words)
        pair = all_pairs_farther_than(imgs, 2 * r_n)
        if pair is not None:
            report.failures.append(f"round {n}: image balls around {pair} intersect at radius {r_n}")
        prev_r = radius_schedule(params, n - 1)
        sep = 2 * params.alpha * prev_r
        report.separation_bounds.append(sep)
        pair = all_pairs_farther_than(imgs, sep)
        if pair is not None:
            report.failures.append(f"round {n}: images {pair} within {sep}")
        prev_imgs = _image(prev_h, prev_words)
        for y, (img, p) in enumerate(zip(imgs, parents)):
            if box_distance(img, prev_imgs[p]) + r_n > prev_r:
                report.failures.append(f"round {n}: ball of E-point {y} is not nested in its parent's ball")
                break
        if n >= 2:
            cross = params.alpha * radius_schedule(params, n - 2) / 4
            bad = _cross_family_violation(imgs, parents, cross)
            if bad is not None:
                report.failures.append(f"round {n}: families {bad} closer than {cross}")
        prev_words, prev_h = words, h
    last = t.rounds[-1]
    final = covering_number(_image(last.bob.center, prev_words), last.bob.radius)
    count = final if isinstance(final, int) else final.lower
    report.final_count = count
    report.final_scale = last.bob.radius
    if count < N ** len(t.rounds):
        report.failures.append(f"final covering count {count} below N^n = {N ** len(t.rounds)}")
    report.dimension_estimate = math.log(count) / -math.log(last.bob.radius) if last.bob.radius < 1 else 0.0
    report.predicted = math.log(N) / -math.log(params.alpha * params.beta)
    return report


def _cross_family_violation(imgs, parents, bound):
    """Return a pair of parent indices whose families come within ``bound``, else None."""
    grid = GridIndex(bound)
    for img, p in zip(imgs, parents):
        for other, q in grid.near(img, bound):
            if q != p and box_distance(img, other) < bound:
                return (q, p)
        grid.add(img, p)
    return None


def image_points(t: Transcript, n: Optional[int] = None) -> list:
    """Images h_n(y), y in E_n, for round ``n`` (default: last round)."""
    rnd = t.rounds[-1] if n is None else t.rounds[n - 1]
    return _image(rnd.bob.center, rnd.alice_meta["E"])


def family_points(t: Transcript, n: Optional[int] = None) -> list:
    rnd = t.rounds[-1] if n is None else t.rounds[n - 1]
    return [cylinder_point(w) for w in rnd.alice_meta["E"]]
