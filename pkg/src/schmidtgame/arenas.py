"""The four metric arenas: rational line, box, hyperspace and Cantor functions.

Points are plain immutable values:

* line: ``Fraction``
* box ``[0,1]^d`` (max metric): ``tuple`` of d Fractions
* hyperspace of finite subsets of the box (Hausdorff metric): :class:`PointSet`
* piecewise-constant maps from the Cantor set to R^d (sup metric):
  :class:`CylinderFunction`
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import ALICE, BOB, Ball, Strategy, Turn
from .errors import ConfigurationError
from .geometry import box_distance, nearest_distance_1d
from .rational import as_rational, format_rational, parse_rational

RANDOM_GRAIN = 2**12


# --- point types -----------------------------------------------------------


def box_vector(coords: Iterable) -> tuple:
    vec = tuple(as_rational(c) for c in coords)
    if not vec:
        raise ConfigurationError("box vectors need at least one coordinate")
    for c in vec:
        if not 0 <= c <= 1:
            raise ConfigurationError(f"box coordinate {c} outside [0, 1]")
    return vec


class PointSet:
    """Nonempty, duplicate-free finite subset of ``[0,1]^d`` in sorted order."""

    __slots__ = ("points", "dim", "_xs")

    def __init__(self, points: Iterable):
        pts = set()
        for p in points:
            pts.add(p if isinstance(p, tuple) and all(type(c) is Fraction for c in p) else box_vector(p))
        if not pts:
            raise ConfigurationError("a PointSet must be nonempty")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ConfigurationError("PointSet mixes dimensions")
        self.points = tuple(sorted(pts))
        self.dim = dims.pop()
        self._xs = None

    def validate(self):
        for p in self.points:
            box_vector(p)

    @property
    def xs(self) -> list:
        """Sorted first coordinates (the whole point when d = 1)."""
        if self._xs is None:
            self._xs = [p[0] for p in self.points]
        return self._xs

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        if len(self.points) <= 4:
            return f"PointSet({[tuple(str(c) for c in p) for p in self.points]})"
        return f"PointSet(<{len(self.points)} points in dim {self.dim}>)"


def cylinder_interval(word: str) -> tuple:
    """Closed middle-thirds interval of the Cantor cylinder ``word``."""
    left = Fraction(0)
    scale = Fraction(1)
    for ch in word:
        scale /= 3
        if ch == "1":
            left += 2 * scale
        elif ch != "0":
            raise ConfigurationError(f"cylinder words are binary, got {word!r}")
    return left, left + scale


def cylinder_point(word: str) -> Fraction:
    """The Cantor point whose address is ``word`` followed by zeros."""
    return cylinder_interval(word)[0]


class CylinderFunction:
    """Piecewise-constant map K -> R^d on a finite partition into Cantor cylinders.

    ``values`` maps a complete prefix-free set of binary words to d-vectors.
    A uniform-depth function (all words of length m) is the usual case;
    strategies refine only the cylinders they touch, so the partition may mix
    depths. ``depth`` is the longest word length.
    """

    __slots__ = ("values", "dim", "depth", "_sorted")

    def __init__(self, values: Mapping[str, Sequence], dim: int | None = None, check: bool = True):
        vals = {}
        for word, vec in values.items():
            vals[word] = vec if isinstance(vec, tuple) and all(type(c) is Fraction for c in vec) else tuple(
                as_rational(c) for c in vec
            )
        if not vals:
            raise ConfigurationError("a CylinderFunction needs at least one cylinder")
        dims = {len(v) for v in vals.values()}
        if len(dims) != 1 or (dim is not None and dims != {dim}):
            raise ConfigurationError("CylinderFunction values must share one dimension")
        self.values = vals
        self.dim = dims.pop()
        self.depth = max(len(w) for w in vals)
        self._sorted = None
        if check:
            self._check_partition()

    @classmethod
    def constant(cls, vec: Sequence, depth: int = 0) -> "CylinderFunction":
        vec = tuple(as_rational(c) for c in vec)
        return cls({w: vec for w in all_words(depth)}, check=False)

    def _check_partition(self):
        words = sorted(self.values)
        for w in words:
            if any(ch not in "01" for ch in w):
                raise ConfigurationError(f"cylinder words are binary, got {w!r}")
        for a, b in zip(words, words[1:]):
            if b.startswith(a):
                raise ConfigurationError(f"cylinders {a!r} and {b!r} overlap")
        if sum(Fraction(1, 2 ** len(w)) for w in words) != 1:
            raise ConfigurationError("cylinders do not cover the Cantor set")

    def validate(self):
        self._check_partition()

    def piece_of(self, word: str):
        """Partition word containing cylinder ``word``, or None if ``word`` is split further."""
        vals = self.values
        for k in range(len(word), -1, -1):
            prefix = word[:k]
            if prefix in vals:
                return prefix
        return None

    def value_at(self, word: str) -> tuple:
        piece = self.piece_of(word)
        if piece is None:
            raise KeyError(f"function is not constant on cylinder {word!r}")
        return self.values[piece]

    def is_uniform(self) -> bool:
        return all(len(w) == self.depth for w in self.values)

    def __eq__(self, other):
        return isinstance(other, CylinderFunction) and distance(self, other) == 0

    def __hash__(self):
        return hash(self.dim)

    def __repr__(self):
        return f"CylinderFunction(<{len(self.values)} cylinders, depth {self.depth}, dim {self.dim}>)"


def all_words(depth: int) -> list:
    if depth < 0:
        raise ConfigurationError("depth must be nonnegative")
    return [format(i, f"0{depth}b") if depth else "" for i in range(2**depth)]


# --- distances -------------------------------------------------------------


def hausdorff_distance(A: PointSet, B: PointSet) -> Fraction:
    """Hausdorff distance between finite sets under the max metric."""
    if not isinstance(A, PointSet):
        A = PointSet(A)
    if not isinstance(B, PointSet):
        B = PointSet(B)
    if A.dim != B.dim:
        raise ConfigurationError("Hausdorff distance between sets of different dimension")
    if A.dim == 1:
        return _hausdorff_1d(A.xs, B.xs)
    return max(_directed(A, B), _directed(B, A))


def _hausdorff_1d(xs: list, ys: list) -> Fraction:
    # scale to integers over a common denominator: exact, and integer
    # comparisons are much cheaper than Fraction ones
    unit = 1
    for v in xs:
        unit = math.lcm(unit, v.denominator)
    for v in ys:
        unit = math.lcm(unit, v.denominator)
    a = [v.numerator * (unit // v.denominator) for v in xs]
    b = [v.numerator * (unit // v.denominator) for v in ys]
    worst = max(max(nearest_distance_1d(b, v) for v in a), max(nearest_distance_1d(a, v) for v in b))
    return Fraction(worst, unit)


def _directed(A: PointSet, B: PointSet) -> Fraction:
    """max over a in A of the distance from a to B."""
    bx = B.xs
    bpts = B.points
    worst = Fraction(0)
    for a in A.points:
        # search outward from a's first coordinate; prune once the gap in the
        # first coordinate alone exceeds the best candidate
        i = bisect_left(bx, a[0])
        best = None
        lo, hi = i - 1, i
        while lo >= 0 or hi < len(bpts):
            if hi < len(bpts) and (lo < 0 or bx[hi] - a[0] <= a[0] - bx[lo]):
                gap, j = bx[hi] - a[0], hi
                hi += 1
            else:
                gap, j = a[0] - bx[lo], lo
                lo -= 1
            if best is not None and gap >= best:
                break
            d = box_distance(a, bpts[j])
            if best is None or d < best:
                best = d
        if best > worst:
            worst = best
    return worst


def function_distance(f: CylinderFunction, g: CylinderFunction) -> Fraction:
    """Sup distance over the common refinement of the two partitions."""
    if f.dim != g.dim:
        raise ConfigurationError("functions have different target dimensions")
    worst = Fraction(0)
    for src, other in ((f, g), (g, f)):
        for word, vec in src.values.items():
            piece = other.piece_of(word)
            if piece is None:
                continue  # other is finer here; its pieces are visited in the other pass
            d = box_distance(vec, other.values[piece])
            if d > worst:
                worst = d
    return worst


def refine_cylinders(f: CylinderFunction, new_depth: int) -> CylinderFunction:
    """Uniform-depth copy of ``f``: every depth-``new_depth`` word inherits its ancestor's value."""
    if new_depth < f.depth:
        raise ConfigurationError(f"cannot refine depth {f.depth} function to depth {new_depth}")
    vals = {}
    for word, vec in f.values.items():
        extra = new_depth - len(word)
        for tail in all_words(extra):
            vals[word + tail] = vec
    return CylinderFunction(vals, check=False)


def distance(p, q) -> Fraction:
    """Distance in whichever arena ``p`` and ``q`` belong to."""
    if isinstance(p, Fraction) and isinstance(q, Fraction):
        return abs(p - q)
    if isinstance(p, tuple) and isinstance(q, tuple):
        if len(p) != len(q):
            raise ConfigurationError("box vectors of different dimension")
        return box_distance(p, q)
    if isinstance(p, PointSet) and isinstance(q, PointSet):
        return hausdorff_distance(p, q)
    if isinstance(p, CylinderFunction) and isinstance(q, CylinderFunction):
        return function_distance(p, q)
    if isinstance(p, int) and isinstance(q, int):
        return Fraction(abs(p - q))
    raise ConfigurationError(f"points from different arenas: {type(p).__name__} vs {type(q).__name__}")


# --- arenas ----------------------------------------------------------------


def _unit(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-RANDOM_GRAIN, RANDOM_GRAIN), RANDOM_GRAIN)


def _clip01(x: Fraction) -> Fraction:
    return min(max(x, Fraction(0)), Fraction(1))


class LineArena:
    tag = "line"
    dim = 1

    def distance(self, p, q):
        if not (isinstance(p, Fraction) and isinstance(q, Fraction)):
            raise ConfigurationError("line arena points are rationals")
        return abs(p - q)

    def validate(self, p):
        if not isinstance(p, Fraction):
            raise ConfigurationError(f"line arena expects a Fraction, got {type(p).__name__}")

    def default_point(self):
        return Fraction(0)

    def random_point(self, rng):
        return Fraction(rng.randint(0, RANDOM_GRAIN), RANDOM_GRAIN)

    def perturb(self, center, slack, rng, spawn=1):
        return center + slack * _unit(rng)

    def encode(self, p):
        return format_rational(p)

    def decode(self, obj):
        return parse_rational(obj)

    def describe(self):
        return {}


class BoxArena:
    tag = "box"

    def __init__(self, dim: int = 1):
        if dim < 1:
            raise ConfigurationError("box dimension must be >= 1")
        self.dim = dim

    def distance(self, p, q):
        return box_distance(p, q)

    def validate(self, p):
        if not isinstance(p, tuple) or len(p) != self.dim:
            raise ConfigurationError(f"box arena expects a {self.dim}-tuple")
        box_vector(p)

    def default_point(self):
        return tuple(Fraction(0) for _ in range(self.dim))

    def random_point(self, rng):
        return tuple(Fraction(rng.randint(0, RANDOM_GRAIN), RANDOM_GRAIN) for _ in range(self.dim))

    def perturb(self, center, slack, rng, spawn=1):
        return tuple(_clip01(c + slack * _unit(rng)) for c in center)

    def encode(self, p):
        return [format_rational(c) for c in p]

    def decode(self, obj):
        return box_vector(parse_rational(c) for c in obj)

    def describe(self):
        return {"dim": self.dim}


class HyperspaceArena:
    """Finite subsets of ``[0,1]^d`` under the Hausdorff metric."""

    tag = "hyperspace"

    def __init__(self, dim: int = 1, initial_size: int = 4):
        if dim < 1:
            raise ConfigurationError("box dimension must be >= 1")
        self.dim = dim
        self.initial_size = initial_size
        self._box = BoxArena(dim)

    def distance(self, p, q):
        return hausdorff_distance(p, q)

    def validate(self, p):
        if not isinstance(p, PointSet) or p.dim != self.dim:
            raise ConfigurationError(f"hyperspace arena expects a PointSet in dimension {self.dim}")
        p.validate()

    def default_point(self):
        return PointSet([tuple(Fraction(1, 2) for _ in range(self.dim))])

    def random_point(self, rng):
        k = rng.randint(1, self.initial_size)
        return PointSet(self._box.random_point(rng) for _ in range(k))

    def perturb(self, center, slack, rng, spawn=1):
        return PointSet(self._box.perturb(p, slack, rng) for p in center.points for _ in range(spawn))

    def encode(self, p):
        return [[format_rational(c) for c in q] for q in p.points]

    def decode(self, obj):
        return PointSet(tuple(parse_rational(c) for c in q) for q in obj)

    def describe(self):
        return {"dim": self.dim}


class FunctionArena:
    """Piecewise-constant functions from the middle-thirds Cantor set to R^d."""

    tag = "function"

    def __init__(self, dim: int = 1):
        if dim < 1:
            raise ConfigurationError("target dimension must be >= 1")
        self.dim = dim

    def distance(self, p, q):
        return function_distance(p, q)

    def validate(self, p):
        if not isinstance(p, CylinderFunction) or p.dim != self.dim:
            raise ConfigurationError(f"function arena expects a CylinderFunction into R^{self.dim}")

    def default_point(self):
        return CylinderFunction.constant([0] * self.dim)

    def random_point(self, rng):
        return CylinderFunction.constant([Fraction(rng.randint(0, RANDOM_GRAIN), RANDOM_GRAIN) for _ in range(self.dim)])

    def perturb(self, center, slack, rng, spawn=1):
        vals = {w: tuple(c + slack * _unit(rng) for c in v) for w, v in center.values.items()}
        return CylinderFunction(vals, check=False)

    def encode(self, p):
        return {"depth": p.depth, "values": {w: [format_rational(c) for c in v] for w, v in sorted(p.values.items())}}

    def decode(self, obj):
        fn = CylinderFunction({w: tuple(parse_rational(c) for c in v) for w, v in obj["values"].items()})
        if fn.depth != int(obj["depth"]):
            raise ConfigurationError("declared depth does not match the cylinder words")
        return fn

    def describe(self):
        return {"dim": self.dim}


ARENAS = {"line": LineArena, "box": BoxArena, "hyperspace": HyperspaceArena, "function": FunctionArena}


def make_arena(tag: str, dim: int = 1, **kwargs):
    if tag not in ARENAS:
        raise ConfigurationError(f"unknown arena {tag!r}; choose from {sorted(ARENAS)}")
    if tag == "line":
        if dim != 1:
            raise ConfigurationError("the line arena is one-dimensional")
        return LineArena()
    return ARENAS[tag](dim, **kwargs)


def arena_from_description(obj: dict):
    return make_arena(obj["arena"], int(obj.get("dim", 1)))


# --- randomized adversary --------------------------------------------------


def allowed_slack(turn: Turn) -> Fraction:
    """How far the new center may move from the previous one."""
    ratio = turn.params.alpha if turn.role == ALICE else turn.params.beta
    return (1 - ratio) * turn.previous.radius


def random_legal_move(turn: Turn, spawn: int = 1) -> Ball:
    """Uniformly spread legal move: the previous center displaced within the slack.

    In the hyperspace every point is perturbed independently; ``spawn`` > 1
    replaces each point by that many perturbed copies (still legal).
    """
    arena = turn.arena
    if turn.previous is None:
        return Ball(arena.random_point(turn.rng), turn.radius)
    slack = allowed_slack(turn)
    if slack == 0:
        return Ball(turn.previous.center, turn.radius)
    return Ball(arena.perturb(turn.previous.center, slack, turn.rng, spawn), turn.radius)


class RandomStrategy(Strategy):
    """Seeded random adversary used to exercise the proofs' 'for all opponent play'."""

    name = "random"

    def __init__(self, spawn: int = 1, start=None):
        if spawn < 1:
            raise ConfigurationError("spawn must be >= 1")
        self.spawn = spawn
        self.start = start

    def move(self, turn):
        if turn.previous is None and self.start is not None:
            return Ball(self.start, turn.radius)
        return random_legal_move(turn, self.spawn)
