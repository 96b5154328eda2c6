"""Net-refinement strategies on the hyperspace of finite subsets of [0,1]^d.

Two families, each playable by either role:

* branching: every anchor of the previous move spawns at least N separated
  children, so the outcome keeps a uniform branching (positive lower
  dimension);
* thinning: the opponent's set is re-covered by a bounded number of balls per
  anchor, which caps localized covering growth (Assouad dimension below d).

Throughout, ``t`` is the radius of the mover's new ball, ``s`` the mover's
legal slack and ``o`` the opponent's contraction ratio.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arenas import PointSet
from .core import ALICE, BOB, Ball, GameParams, Strategy, Transcript, Turn, radius_schedule
from .errors import ConfigurationError, InvariantViolation
from .geometry import GridIndex, all_pairs_farther_than, greedy_separated
from .rational import format_rational, parse_rational

MAX_POINTS = 100_000


def separated_net(K: PointSet, sep: Fraction, cover_r: Fraction) -> PointSet:
    """Greedy maximal subset of ``K`` with pairwise distances > ``sep``.

    Points are scanned in lexicographic order. Every point of ``K`` ends up
    within ``sep`` (hence within ``cover_r``) of the net.
    """
    sep, cover_r = Fraction(sep), Fraction(cover_r)
    if sep <= 0:
        raise ConfigurationError("sep must be positive")
    if cover_r < 2 * sep:
        raise ConfigurationError(f"cover radius {cover_r} is below twice the separation {sep}")
    return PointSet(greedy_separated(K.points, sep))


def _ratios(role: str, params: GameParams) -> tuple:
    if role == ALICE:
        return params.alpha, params.beta
    if role == BOB:
        return params.beta, params.alpha
    raise ConfigurationError(f"unknown role {role!r}")


def _own_previous(turn: Turn) -> Optional[Ball]:
    hist = turn.history
    if turn.role == ALICE:
        return hist[-2] if len(hist) >= 3 else None
    return hist[-2] if len(hist) >= 2 else None


def _clusters(anchors: PointSet, opponent: PointSet, radius: Fraction) -> list:
    """Assign each opponent point to the unique anchor within ``radius``."""
    grid = GridIndex(radius, anchors.points)
    groups = [[] for _ in anchors.points]
    for q in opponent.points:
        hits = [tag for _, tag in grid.near(q, radius)]
        if len(hits) != 1:
            raise InvariantViolation(f"opponent point is near {len(hits)} anchors; clusters are not separated")
        groups[hits[0]].append(q)
    for i, g in enumerate(groups):
        if not g:
            raise InvariantViolation(f"anchor {i} received no opponent point")
    return groups


class _NetStrategy(Strategy):
    mode = "net"

    def __init__(self, role: str, params: Optional[GameParams] = None, start=None, max_points: int = MAX_POINTS):
        if role not in (ALICE, BOB):
            raise ConfigurationError(f"unknown role {role!r}")
        self.role = role
        self.start = start
        self.max_points = max_points
        if params is not None:
            self.check_feasible(params)

    def check_feasible(self, params: GameParams) -> None:
        raise NotImplementedError

    def reset(self, params, arena):
        if arena.tag != "hyperspace":
            raise ConfigurationError("net strategies play on the hyperspace arena")
        self.check_feasible(params)
        self.dim = arena.dim

    def _opening(self, turn):
        start = self.start if self.start is not None else turn.arena.default_point()
        meta = {"mode": self.mode, "generation": 0, "parents": [-1] * len(start), "child_counts": []}
        return Ball(start, turn.radius), meta

    def move(self, turn: Turn):
        if turn.role != self.role:
            raise ConfigurationError(f"{self.mode} strategy built for {self.role} asked to play {turn.role}")
        if turn.previous is None:
            return self._opening(turn)
        m, o = _ratios(turn.role, turn.params)
        t = turn.radius
        s = (1 - m) * turn.previous.radius
        opponent = turn.previous.center
        own = _own_previous(turn)
        if own is None:
            points, parents, counts = self.first_cover(opponent, t, s)
            generation = 0
        else:
            groups = _clusters(own.center, opponent, (1 - o) * own.radius)
            points, parents, counts = self.refine(groups, t, s, o)
            generation = (turn.n - 1) if turn.role == ALICE else turn.n
        if len(points) > self.max_points:
            raise ConfigurationError(f"move would hold {len(points)} points (cap {self.max_points})")
        order = sorted(range(len(points)), key=lambda i: points[i])
        pts = PointSet(points[i] for i in order)
        if len(pts) != len(points):
            raise InvariantViolation("duplicate points in a net move")
        meta = {
            "mode": self.mode,
            "generation": generation,
            "parents": [parents[i] for i in order],
            "child_counts": counts,
            "separation": format_rational(self.separation(t, s)),
        }
        meta.update(self.extra_meta(turn.params))
        return Ball(pts, t), meta

    def extra_meta(self, params):
        return {}


class BranchingStrategy(_NetStrategy):
    """Each anchor spawns ``N`` children spread over the mover's slack."""

    mode = "branching"

    def __init__(self, role, params=None, N: int = 2, start=None, max_points=MAX_POINTS):
        if N < 2:
            raise ConfigurationError("branching needs N >= 2")
        self.N = N
        super().__init__(role, params, start, max_points)

    def check_feasible(self, params):
        m, _ = _ratios(self.role, params)
        name = "alpha" if self.role == ALICE else "beta"
        # N children spread over the slack (1-m)R must be > 4mR apart
        if not (1 - m) > 4 * m * (self.N - 1):
            limit = Fraction(1, 4 * self.N - 3)
            raise ConfigurationError(f"branching with N={self.N} as {self.role} needs {name} < {limit}, got {m}")
        if params.r0 > 1:
            raise ConfigurationError("branching on [0,1]^d needs r0 <= 1")

    def separation(self, t, s):
        return 4 * t

    def extra_meta(self, params):
        return {"N": self.N}

    def first_cover(self, opponent, t, s):
        pts = greedy_separated(opponent.points, 4 * t)
        return pts, [-1] * len(pts), []

    def children(self, rep: tuple, s: Fraction) -> list:
        lo, hi = rep[0] - s / 2, rep[0] + s / 2
        shift = Fraction(0)
        if lo < 0:
            shift = -lo
        elif hi > 1:
            shift = 1 - hi
        step = s / (self.N - 1)
        return [(lo + shift + i * step,) + rep[1:] for i in range(self.N)]

    def refine(self, groups, t, s, o):
        sep = 4 * t
        grid = GridIndex(sep)
        points, parents = [], []
        for i, group in enumerate(groups):
            kids = self.children(min(group), s)
            for kid in kids:
                if grid.any_within(kid, sep):
                    raise InvariantViolation("branching children collide; separation ledger broken")
                grid.add(kid)
                points.append(kid)
                parents.append(i)
        for i, group in enumerate(groups):
            for q in sorted(group):
                if not grid.any_within(q, sep):
                    grid.add(q)
                    points.append(q)
                    parents.append(i)
        counts = [0] * len(groups)
        for p in parents:
            counts[p] += 1
        return points, parents, counts


class ThinningStrategy(_NetStrategy):
    """Re-cover the opponent's set with few balls of the mover's slack radius."""

    mode = "thinning"

    def check_feasible(self, params):
        m, _ = _ratios(self.role, params)
        name = "alpha" if self.role == ALICE else "beta"
        if not m < Fraction(1, 4):
            raise ConfigurationError(f"thinning as {self.role} needs {name} < 1/4, got {m}")

    def separation(self, t, s):
        return s

    def step_bound(self, params, dim) -> int:
        _, o = _ratios(self.role, params)
        return 2**dim * math.ceil((1 - o) / o) ** dim

    def extra_meta(self, params):
        return {"step_bound": self.step_bound(params, self.dim)}

    def first_cover(self, opponent, t, s):
        pts = _cell_cover(list(opponent.points), s)
        return pts, [-1] * len(pts), []

    def refine(self, groups, t, s, o):
        points, parents, counts = [], [], []
        for i, group in enumerate(groups):
            cover = _cell_cover(group, s)
            points.extend(cover)
            parents.extend([i] * len(cover))
            counts.append(len(cover))
        return points, parents, counts


def _cell_cover(group: Sequence[tuple], s: Fraction) -> list:
    """Centers of the nonempty cubes of side 2s tiling the group's bounding box.

    Each center (clipped into the unit box) lies within ``s`` of every point of
    its cube, so the cover is a legal move with slack ``s``.
    """
    dim = len(group[0])
    corner = [min(p[c] for p in group) for c in range(dim)]
    side = 2 * s
    cells = {}
    for p in group:
        key = tuple(math.floor((p[c] - corner[c]) / side) for c in range(dim))
        cells.setdefault(key, p)
    out = []
    for key in sorted(cells):
        center = tuple(min(corner[c] + (key[c] * 2 + 1) * s, Fraction(1)) for c in range(dim))
        out.append(center)
    return out


def branching_strategy(role: str, params: Optional[GameParams] = None, N: int = 2, **kwargs) -> BranchingStrategy:
    return BranchingStrategy(role, params, N, **kwargs)


def thinning_strategy(role: str, params: Optional[GameParams] = None, **kwargs) -> ThinningStrategy:
    return ThinningStrategy(role, params, **kwargs)


# --- transcript views ------------------------------------------------------


@dataclass(frozen=True)
class Generation:
    index: int
    round: int
    points: PointSet
    radius: Fraction
    meta: dict


def mover_generations(t: Transcript, role: str) -> list:
    """The mover's successive sets with their recorded net metadata."""
    gens = []
    if role == BOB:
        items = [(0, t.initial, t.initial_meta)] + [(r.n, r.bob, r.bob_meta) for r in t.rounds]
    else:
        items = [(r.n, r.alice, r.alice_meta) for r in t.rounds]
    for rnd, ball, meta in items:
        if not meta or "generation" not in meta:
            raise ConfigurationError(f"round {rnd}: {role} move carries no net metadata")
        gens.append(Generation(meta["generation"], rnd, ball.center, ball.radius, meta))
    return gens


def outcome_set(t: Transcript) -> PointSet:
    return (t.rounds[-1].bob if t.rounds else t.initial).center


@dataclass(frozen=True)
class CoveringBoundCheck:
    n: int
    m: int
    x: tuple
    R: Fraction
    scale: Fraction
    measured: int
    bound: int
    kind: str

    @property
    def slack(self) -> int:
        return self.measured - self.bound if self.kind == "lower" else self.bound - self.measured

    @property
    def passed(self) -> bool:
        return self.slack >= 0

    def as_dict(self):
        return {
            "n": self.n,
            "m": self.m,
            "x": [format_rational(c) for c in self.x],
            "R": format_rational(self.R),
            "scale": format_rational(self.scale),
            "measured": self.measured,
            "bound": self.bound,
            "kind": self.kind,
            "slack": self.slack,
            "pass": self.passed,
        }


def verify_covering_bounds(t: Transcript, checks: Iterable, role: str) -> list:
    """Evaluate the covering inequalities on the game's outcome.

    ``checks`` holds ``(n, m, x, R)`` with generation indices ``m <= n``.
    Branching: N_{(1-o) t_n}(K cap B(x,R)) >= N^(n-m).
    Thinning: N_{t_n}(K cap B(x,R)) <= C (2/(alpha beta))^d (C o^-d)^(n-m), C = 2^d.
    Here K is the last Bob set and t_n the radius of the mover's generation-n ball.
    """
    from .analysis import BallCounter

    gens = mover_generations(t, role)
    mode = gens[-1].meta["mode"]
    K = outcome_set(t)
    d = K.dim
    counter = BallCounter(list(K.points))
    _, o = _ratios(role, t.params)
    out = []
    for n, m, x, R in checks:
        n, m = int(n), int(m)
        if not (0 <= m <= n < len(gens)):
            raise ConfigurationError(f"check (n={n}, m={m}) outside generations 0..{len(gens) - 1}")
        x = tuple(Fraction(c) for c in x)
        R = Fraction(R)
        t_n = gens[n].radius
        if mode == "branching":
            scale = (1 - o) * t_n
            bound = gens[-1].meta["N"] ** (n - m)
            kind = "lower"
            measured = counter.count(x, R, scale)[0]
        else:
            C = 2**d
            scale = t_n
            bound = C * (2 / (t.params.alpha * t.params.beta)) ** d * (C * (1 / o) ** d) ** (n - m)
            bound = math.floor(bound)
            kind = "upper"
            measured = counter.count(x, R, scale)[1]
        out.append(CoveringBoundCheck(n, m, x, R, scale, measured, bound, kind))
    return out


def sample_covering_checks(t: Transcript, role: str, count: int, seed: int = 0) -> list:
    """Random (n, m, x, R) checks inside each bound's regime.

    Branching uses R = 2 t_m, large enough that B(x,R) holds the whole
    generation-m subtree through x; thinning draws R from (t_{m+1}, t_m].
    """
    rng = random.Random(f"checks:{seed}")
    gens = mover_generations(t, role)
    last = len(gens) - 1
    K = outcome_set(t).points
    mode = gens[-1].meta["mode"]
    checks = []
    for _ in range(count):
        m = rng.randint(0, max(0, last - 1))
        n = rng.randint(m, last)
        x = rng.choice(K)
        if mode == "branching":
            R = 2 * gens[m].radius
        else:
            hi = gens[m].radius
            lo = gens[m + 1].radius if m + 1 <= last else hi / 2
            R = lo + (hi - lo) * Fraction(rng.randint(1, 1024), 1024)
        checks.append((n, m, x, R))
    return checks


def verify_net_transcript(t: Transcript, role: str) -> list:
    """Structural checks from the recorded metadata; returns failure strings."""
    from .core import check_transcript

    failures = list(check_transcript(t))
    gens = mover_generations(t, role)
    for prev, gen in zip([None] + gens[:-1], gens):
        meta = gen.meta
        sep = parse_rational(meta["separation"]) if "separation" in meta else None
        pts = gen.points.points
        if sep is not None:
            # branching separation is strict, thinning only needs distance >= sep
            pair = all_pairs_farther_than(pts, sep, strict=meta["mode"] == "branching")
            if pair is not None:
                failures.append(f"generation {gen.index}: points {pair} not separated by {sep}")
        if prev is None or gen.index == 0:
            continue
        counts = meta["child_counts"]
        if len(counts) != len(prev.points):
            failures.append(f"generation {gen.index}: child counts do not match the previous generation")
            continue
        parents = meta["parents"]
        tally = [0] * len(prev.points)
        for p in parents:
            tally[p] += 1
        if tally != counts:
            failures.append(f"generation {gen.index}: parents disagree with child counts")
        if meta["mode"] == "branching" and min(counts) < meta["N"]:
            failures.append(f"generation {gen.index}: an anchor has fewer than N={meta['N']} children")
        if meta["mode"] == "thinning" and max(counts) > meta["step_bound"]:
            failures.append(f"generation {gen.index}: {max(counts)} children exceed the bound {meta['step_bound']}")
    return failures


def leaf_count(t: Transcript, role: str) -> int:
    return len(mover_generations(t, role)[-1].points)
