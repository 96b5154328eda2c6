"""Property suites behind ``schmidtgame verify`` plus brute-force oracles.

Each suite returns a SuiteResult holding one PropertyResult per property,
with the first counterexample recorded on failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .analysis import build_porous_set, covering_number, moran_set_from_digits, porous_witness
from .arenas import (
    RANDOM_GRAIN,
    BoxArena,
    FunctionArena,
    HyperspaceArena,
    LineArena,
    PointSet,
    RandomStrategy,
    hausdorff_distance,
)
from .core import ALICE, BOB, GameParams, check_transcript, play, radius_schedule
from .digits import BalancedStrategy, alice_force_digit, digit_ledger, frequency_report, run_certificates
from .errors import ConfigurationError, InvariantViolation
from .function_game import fat_image_strategy, verify_branching
from .geometry import box_distance
from .hyperspace import (
    branching_strategy,
    sample_covering_checks,
    thinning_strategy,
    verify_covering_bounds,
    verify_net_transcript,
)


# --- oracles -------------------------------------------------------------------


def brute_force_hausdorff(A, B) -> Fraction:
    """Textbook double loop, no indexing or pruning."""
    A = list(A.points if isinstance(A, PointSet) else A)
    B = list(B.points if isinstance(B, PointSet) else B)
    ab = max(min(box_distance(a, b) for b in B) for a in A)
    ba = max(min(box_distance(a, b) for a in A) for b in B)
    return max(ab, ba)


def exhaustive_min_cover(xs, r) -> int:
    """Fewest sets of diameter <= r covering the reals ``xs`` by subset search.

    Enumerates every subset, keeps the maximal ones of diameter <= r (enough,
    since subsets of a valid set are valid) and searches unions breadth
    first. No ordering property of the line is used.
    """
    xs = list(xs)
    n = len(xs)
    if n == 0:
        return 0
    if n > 16:
        raise ConfigurationError("exhaustive cover is limited to 16 points")
    full = (1 << n) - 1
    lo = [None] * (1 << n)
    hi = [None] * (1 << n)
    valid = [False] * (1 << n)
    valid[0] = True
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        x = xs[low]
        lo[mask] = x if rest == 0 else min(lo[rest], x)
        hi[mask] = x if rest == 0 else max(hi[rest], x)
        valid[mask] = valid[rest] and hi[mask] - lo[mask] <= r
    maximal = [
        m for m in range(1, 1 << n) if valid[m] and not any(valid[m | (1 << i)] for i in range(n) if not m >> i & 1)
    ]
    frontier, seen, k = {0}, {0}, 0
    while full not in frontier:
        k += 1
        frontier = {f | m for f in frontier for m in maximal} - seen
        seen |= frontier
    return k


# --- results -------------------------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" counterexample: {self.counterexample}" if self.counterexample else ""
        return f"{status} {self.name} ({self.checked} checked){tail}"


@dataclass
class SuiteResult:
    suite: str
    properties: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def as_dict(self):
        return {
            "suite": self.suite,
            "pass": self.passed,
            "properties": [
                {"name": p.name, "pass": p.passed, "checked": p.checked, "counterexample": p.counterexample}
                for p in self.properties
            ],
        }


class _Prop:
    """Accumulates checks for one property, keeping the first failure."""

    def __init__(self, name):
        self.result = PropertyResult(name, True)

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        self.result.checked += 1
        if not ok and self.result.passed:
            self.result.passed = False
            self.result.counterexample = describe()


def _rand_frac(rng, grain=RANDOM_GRAIN):
    return Fraction(rng.randint(0, grain), grain)


def _rand_set(rng, dim, size):
    return PointSet(tuple(_rand_frac(rng, 64) for _ in range(dim)) for _ in range(size))


# --- suites ----------------------------------------------------------------------


def suite_metric_axioms(seed: int = 0, samples: int = 200) -> SuiteResult:
    rng = random.Random(f"metric:{seed}")
    props = {k: _Prop(k) for k in ("identity", "symmetry", "triangle", "positivity")}
    arenas = [LineArena(), BoxArena(2), HyperspaceArena(1), HyperspaceArena(2), FunctionArena(1)]
    for i in range(samples):
        arena = arenas[i % len(arenas)]
        p, q, s = (_random_point(arena, rng) for _ in range(3))
        d = arena.distance
        props["identity"].check(d(p, p) == 0, lambda: f"{arena.tag}: d(p,p) != 0 for {p!r}")
        props["symmetry"].check(d(p, q) == d(q, p), lambda: f"{arena.tag}: d(p,q) != d(q,p)")
        props["triangle"].check(d(p, s) <= d(p, q) + d(q, s), lambda: f"{arena.tag}: triangle inequality fails")
        if d(p, q) == 0:
            props["positivity"].check(_same(arena, p, q), lambda: f"{arena.tag}: distinct points at distance 0")
    return SuiteResult("metric-axioms", [p.result for p in props.values()])


def _random_point(arena, rng):
    if arena.tag == "line":
        return _rand_frac(rng, 16)
    if arena.tag == "box":
        return tuple(_rand_frac(rng, 16) for _ in range(arena.dim))
    if arena.tag == "hyperspace":
        return _rand_set(rng, arena.dim, rng.randint(1, 6))
    from .arenas import CylinderFunction, all_words

    depth = rng.randint(0, 3)
    return CylinderFunction({w: (_rand_frac(rng, 8),) for w in all_words(depth)})


def _same(arena, p, q):
    if arena.tag == "function":
        return True  # equal as functions even when partitions differ
    return p == q


def suite_legality(seed: int = 0, samples: int = 10_000) -> SuiteResult:
    """Random play on all four arenas until ``samples`` rounds are recorded."""
    rng = random.Random(f"legality:{seed}")
    prop = _Prop("both move inequalities hold exactly")
    configs = [(LineArena(), 1, 25), (BoxArena(2), 1, 25), (HyperspaceArena(1), 1, 10), (FunctionArena(1), 1, 10)]
    rounds_done, game = 0, 0
    while rounds_done < samples:
        arena, spawn, rounds = configs[game % len(configs)]
        rounds = min(rounds, samples - rounds_done)
        params = GameParams(Fraction(rng.randint(1, 15), 16), Fraction(rng.randint(1, 15), 16), Fraction(1))
        t = play(params, RandomStrategy(spawn), RandomStrategy(spawn), rounds, seed=seed * 100_003 + game, arena=arena)
        problems = check_transcript(t)
        for rnd in t.rounds:
            prop.check(not problems, lambda: f"{arena.tag} game {game}: {problems[0]}")
        rounds_done += rounds
        game += 1
    return SuiteResult("legality", [prop.result])


def suite_digit_ledger(seed: int = 0, samples: int = 20) -> SuiteResult:
    certs, ledger, freq = _Prop("run certificates"), _Prop("ledger count >= forced runs"), _Prop("frequency >= 1/5 - 0.02")
    balanced = _Prop("balanced frequencies in [0.08, 0.92]")
    params = GameParams(Fraction(1, 16), Fraction(1, 2), Fraction(1, 2))
    for s in range(seed, seed + samples):
        t = play(params, alice_force_digit(0, params), RandomStrategy(), 100, seed=s)
        bad = run_certificates(t, ALICE)
        certs.check(not bad, lambda: f"seed {s}: {bad[0]}")
        rows = digit_ledger(t, 0, ALICE)
        broken = [row for row in rows if not row.holds]
        ledger.check(not broken, lambda: f"seed {s}: round {broken[0].round}")
        f = frequency_report(t, 0).frequency
        freq.check(f >= Fraction(1, 5) - Fraction(2, 100), lambda: f"seed {s}: frequency {float(f):.4f}")
        tb = play(params, BalancedStrategy(), RandomStrategy(), 200, seed=s)
        f0, f1 = frequency_report(tb, 0).frequency, frequency_report(tb, 1).frequency
        ok = all(Fraction(8, 100) <= v <= Fraction(92, 100) for v in (f0, f1)) and not run_certificates(tb, ALICE)
        balanced.check(ok, lambda: f"seed {s}: frequencies {float(f0):.3f}, {float(f1):.3f}")
    return SuiteResult("digit-ledger", [p.result for p in (certs, ledger, freq, balanced)])


def suite_net_bounds(seed: int = 0, samples: int = 3) -> SuiteResult:
    structure, lower, upper = _Prop("net structure"), _Prop("branching lower bound"), _Prop("thinning upper bound")
    for s in range(seed, seed + samples):
        for role, (a, b) in ((ALICE, (Fraction(1, 8), Fraction(1, 2))), (BOB, (Fraction(1, 2), Fraction(1, 8)))):
            params = GameParams(a, b, Fraction(1))
            t = _play_role(params, role, branching_strategy(role, params, 2), RandomStrategy(), 10, s)
            _net_checks(t, role, s, structure, lower)
        params = GameParams(Fraction(1, 4), Fraction(1, 8), Fraction(1))
        t = _play_role(params, BOB, thinning_strategy(BOB, params), RandomStrategy(spawn=2), 10, s)
        _net_checks(t, BOB, s, structure, upper)
    return SuiteResult("net-bounds", [p.result for p in (structure, lower, upper)])


def _play_role(params, role, strategy, adversary, rounds, seed):
    arena = HyperspaceArena(1)
    if role == ALICE:
        return play(params, strategy, adversary, rounds, seed=seed, arena=arena)
    return play(params, adversary, strategy, rounds, seed=seed, arena=arena)


def _net_checks(t, role, seed, structure, bound):
    problems = verify_net_transcript(t, role)
    structure.check(not problems, lambda: f"{role} seed {seed}: {problems[0]}")
    for c in verify_covering_bounds(t, sample_covering_checks(t, role, 30, seed), role):
        bound.check(c.passed, lambda: f"{role} seed {seed}: {c.as_dict()}")


def suite_branching(seed: int = 0, samples: int = 3) -> SuiteResult:
    prop = _Prop("fat-image branching construction")
    params = GameParams(Fraction(1, 20), Fraction(1, 2), Fraction(1))
    for s in range(seed, seed + samples):
        try:
            t = play(params, fat_image_strategy(params, 1), RandomStrategy(), 6, seed=s, arena=FunctionArena(1))
            report = verify_branching(t)
            prop.check(report.passed, lambda: f"seed {s}: {report.failures[:1]}")
        except InvariantViolation as exc:
            prop.check(False, lambda: f"seed {s}: {exc}")
    return SuiteResult("branching", [prop.result])


def suite_porosity(seed: int = 0, samples: int = 1000, depth: int = 6) -> SuiteResult:
    prop = _Prop("hole radius >= epsilon*r and hole misses F")
    F = build_porous_set(Fraction(1, 8), Fraction(1, 2), depth)
    rng = random.Random(f"porosity:{seed}")
    for x, r in porosity_queries(F, samples, rng):
        try:
            w = porous_witness(F, x, r)
            problems = w.check(F)
            prop.check(not problems and w.rho >= F.epsilon * r, lambda: f"x={x}, r={r}: {problems}")
        except InvariantViolation as exc:
            prop.check(False, lambda: str(exc))
    return SuiteResult("porosity", [prop.result])


def porosity_queries(F, count: int, rng: random.Random) -> list:
    """Random (x, r) with r log-uniform over the levels in [r_depth, 1/2]."""
    out = []
    for _ in range(count):
        n = rng.randint(1, F.depth)
        r = F.radius(n) * Fraction(rng.randint(1024, int(1024 / (F.alpha * F.beta))), 1024)
        r = min(max(r, F.radius(F.depth)), Fraction(1, 2))
        out.append((Fraction(rng.randint(0, 2**20), 2**20), r))
    return out


def suite_moran(seed: int = 0, samples: int = 100, depth: int = 40) -> SuiteResult:
    slope, count = _Prop("slope == zeros/depth"), _Prop("interval count == 2^zeros")
    rng = random.Random(f"moran:{seed}")
    for _ in range(samples):
        digits = "".join(rng.choice("01") for _ in range(depth))
        m = moran_set_from_digits(digits, depth)
        slope.check(m.slope == Fraction(digits.count("0"), depth), lambda: digits)
        short = moran_set_from_digits(digits, 12)
        listed = list(short.intervals())
        ok = len(listed) == len(set(listed)) == 2 ** digits[:12].count("0")
        count.check(ok, lambda: digits[:12])
    return SuiteResult("moran", [slope.result, count.result])


def suite_oracle_hausdorff(seed: int = 0, samples: int = 500, cover_samples: int = 200) -> SuiteResult:
    haus, cover = _Prop("Hausdorff == brute force"), _Prop("1-D covering == exhaustive minimum")
    rng = random.Random(f"oracle:{seed}")
    for i in range(samples):
        dim = 1 + i % 3
        A, B = _rand_set(rng, dim, rng.randint(1, 12)), _rand_set(rng, dim, rng.randint(1, 12))
        fast, slow = hausdorff_distance(A, B), brute_force_hausdorff(A, B)
        haus.check(fast == slow, lambda: f"{A.points} vs {B.points}: {fast} != {slow}")
    for _ in range(cover_samples):
        xs = sorted({_rand_frac(rng, 32) for _ in range(rng.randint(1, 12))})
        r = Fraction(rng.randint(1, 16), 32)
        fast, slow = covering_number(xs, r), exhaustive_min_cover(xs, r)
        cover.check(fast == slow, lambda: f"{xs}, r={r}: {fast} != {slow}")
    return SuiteResult("oracle-hausdorff", [haus.result, cover.result])


SUITES = {
    "metric-axioms": suite_metric_axioms,
    "legality": suite_legality,
    "digit-ledger": suite_digit_ledger,
    "net-bounds": suite_net_bounds,
    "branching": suite_branching,
    "porosity": suite_porosity,
    "moran": suite_moran,
    "oracle-hausdorff": suite_oracle_hausdorff,
}


def run_suite(name: str, seed: int = 0, samples: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    return fn(seed) if samples is None else fn(seed, samples)
