"""Command-line entry point: play games, analyze transcripts, run property suites.

Exit codes: 0 success, 1 invariant or property violation, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import analysis, digits, function_game, hyperspace
from .arenas import RandomStrategy, make_arena
from .core import (
    ALICE,
    BOB,
    Ball,
    GameParams,
    StayStrategy,
    Strategy,
    check_transcript,
    dumps_transcript,
    legal_move,
    loads_transcript,
    outcome_approx,
    play,
)
from .errors import ConfigurationError, IllegalMoveError, InvariantViolation
from .rational import format_rational, parse_rational
from .verify import SUITES, run_suite

OK, VIOLATION, CONFIG = 0, 1, 2

ALICE_STRATEGIES = ("random", "stay", "force0", "force1", "balanced", "branching", "thinning", "fat-image")
BOB_STRATEGIES = ("random", "stay", "rare0", "rare1", "branching", "thinning")


def rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schmidtgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("play", help="play one game and write its transcript")
    p.add_argument("--arena", default="line", choices=("line", "box", "hyperspace", "function"))
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--beta", type=rational, help="Bob's ratio (derived from --epsilon for rare-digit Bob)")
    p.add_argument("--r0", type=rational, default=Fraction(1))
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("--alice", default="random", choices=ALICE_STRATEGIES)
    p.add_argument("--bob", default="random", choices=BOB_STRATEGIES)
    p.add_argument("--epsilon", type=rational, help="target frequency bound for rare-digit Bob")
    p.add_argument("--sound", action="store_true", help="rare-digit Bob: use the bound with beta < 1/8")
    p.add_argument("--branch-N", dest="branch_n", type=int, default=2)
    p.add_argument("--spawn", type=int, default=1, help="copies per point for random hyperspace moves")
    p.add_argument("--initial-size", type=int, default=4, help="size of a random opening set in the hyperspace")
    p.add_argument("--max-points", type=int, default=hyperspace.MAX_POINTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.add_argument("--interactive-bob", action="store_true", help="type Bob's centers at a prompt")

    a = sub.add_parser("analyze", help="report on a saved transcript")
    a.add_argument("--input", type=Path, required=True)
    a.add_argument("--report", required=True, choices=("frequency", "covering", "branching", "slope", "local"))
    a.add_argument("--digit", type=int, default=0)
    a.add_argument("--role", choices=(ALICE, BOB))
    a.add_argument("--burn-in", type=int)
    a.add_argument("--checks", type=Path, help="covering checks: JSON list of {n, m, x, R}")
    a.add_argument("--scales", help="dyadic exponent range a..b for slope/local reports")
    a.add_argument("--out", type=Path)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int)
    v.add_argument("--queries", type=int, help="alias of --samples for the porosity suite")

    m = sub.add_parser("moran", help="Moran set of a digit prefix")
    m.add_argument("--digits", required=True)
    m.add_argument("--depth", type=int)

    q = sub.add_parser("porosity", help="porosity witnesses on random queries")
    q.add_argument("--alpha", type=rational, required=True)
    q.add_argument("--beta", type=rational, required=True)
    q.add_argument("--depth", type=int, default=6)
    q.add_argument("--queries", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("dimension", help="finite-scale dimension of a point set or transcript outcome")
    d.add_argument("--input", type=Path, required=True)
    d.add_argument("--scales", default="1..10", help="dyadic exponent range a..b")
    d.add_argument("--report", default="slope", choices=("slope", "local"))
    d.add_argument("--out", type=Path)
    return parser


# --- play ------------------------------------------------------------------------


class InteractiveBob(Strategy):
    """Reads Bob's centers from a terminal; illegal input re-prompts."""

    def __init__(self, stdin=None, stdout=None):
        self.stdin = stdin or sys.stdin
        self.stdout = stdout or sys.stdout

    def reset(self, params, arena):
        if arena.tag not in ("line", "box", "hyperspace"):
            raise ConfigurationError("interactive play supports the line, box and hyperspace arenas")
        self.arena = arena

    def _parse(self, text: str):
        text = text.strip()
        if self.arena.tag == "line":
            return parse_rational(text)
        if self.arena.tag == "box":
            return tuple(parse_rational(c) for c in text.split(","))
        from .arenas import PointSet

        return PointSet(tuple(parse_rational(c) for c in pt.split(",")) for pt in text.split(";"))

    def move(self, turn):
        hint = {"line": "p/q", "box": "p/q,p/q,...", "hyperspace": "p/q,...;p/q,...;..."}[self.arena.tag]
        while True:
            if turn.previous is not None:
                print(f"round {turn.n}: Alice's ball {self.arena.encode(turn.previous.center)} radius "
                      f"{format_rational(turn.previous.radius)}", file=self.stdout)
            print(f"Bob, center for radius {format_rational(turn.radius)} [{hint}]: ", end="", file=self.stdout)
            self.stdout.flush()
            line = self.stdin.readline()
            if not line:
                raise ConfigurationError("input ended before the game finished")
            try:
                center = self._parse(line)
                self.arena.validate(center)
            except (ValueError, ConfigurationError) as exc:
                print(f"  rejected: {exc}", file=self.stdout)
                continue
            ball = Ball(center, turn.radius)
            if turn.previous is None or legal_move(BOB, turn.previous, ball, turn.params, self.arena):
                return ball
            print("  rejected: that ball does not fit inside Alice's ball", file=self.stdout)


def _strategies(args, params, arena):
    role_ok = {
        "force0": "line", "force1": "line", "balanced": "line", "rare0": "line", "rare1": "line",
        "branching": "hyperspace", "thinning": "hyperspace", "fat-image": "function",
    }
    for role, name in ((ALICE, args.alice), (BOB, args.bob)):
        need = role_ok.get(name)
        if need and need != arena.tag:
            raise ConfigurationError(f"strategy {name!r} plays on the {need} arena, not {arena.tag}")

    def make(role, name):
        if name == "random":
            return RandomStrategy(spawn=args.spawn)
        if name == "stay":
            return StayStrategy()
        if name in ("force0", "force1"):
            return digits.alice_force_digit(int(name[-1]), params)
        if name == "balanced":
            return digits.alice_force_balanced(params)
        if name in ("rare0", "rare1"):
            return digits.RareDigitStrategy(int(name[-1]))
        if name == "branching":
            return hyperspace.branching_strategy(role, params, args.branch_n, max_points=args.max_points)
        if name == "thinning":
            return hyperspace.thinning_strategy(role, params, max_points=args.max_points)
        if name == "fat-image":
            return function_game.fat_image_strategy(params, args.dim)
        raise ConfigurationError(f"unknown strategy {name!r}")

    alice = make(ALICE, args.alice)
    bob = InteractiveBob() if args.interactive_bob else make(BOB, args.bob)
    return alice, bob


def _resolve_beta(args) -> Fraction:
    if args.bob in ("rare0", "rare1") and args.epsilon is not None:
        beta, _ = digits.bob_force_rare_digit(int(args.bob[-1]), args.epsilon, args.alpha, sound=args.sound)
        if args.beta is not None and args.beta != beta:
            raise ConfigurationError(f"--beta {args.beta} conflicts with beta = {beta} derived from --epsilon")
        return beta
    if args.beta is None:
        raise ConfigurationError("--beta is required (or --epsilon with a rare-digit Bob)")
    return args.beta


def growth_estimate(args, rounds: int) -> int:
    """Largest hyperspace set size the configuration can reach in ``rounds`` rounds."""
    factor = 1
    for name in (args.alice, args.bob):
        if name == "branching":
            factor *= args.branch_n
        elif name == "random":
            factor *= args.spawn
    return args.initial_size * factor**rounds


def admissible_rounds(args) -> int:
    n = 0
    while n < args.rounds and growth_estimate(args, n + 1) <= args.max_points:
        n += 1
    return n


def run_play(args) -> int:
    beta = _resolve_beta(args)
    params = GameParams(args.alpha, beta, args.r0)
    arena = make_arena(args.arena, args.dim, **({"initial_size": args.initial_size} if args.arena == "hyperspace" else {}))
    if args.arena == "hyperspace" and growth_estimate(args, args.rounds) > args.max_points:
        raise ConfigurationError(
            f"sets may grow to {growth_estimate(args, args.rounds)} points, above --max-points {args.max_points}; "
            f"admissible rounds: {admissible_rounds(args)}"
        )
    alice, bob = _strategies(args, params, arena)
    t = play(params, alice, bob, args.rounds, seed=args.seed, arena=arena)
    text = dumps_transcript(t)
    if args.out:
        args.out.write_text(text + "\n")
    problems = check_transcript(t)
    approx, bound = outcome_approx(t)
    summary = {
        "rounds": args.rounds,
        "outcome": _describe_outcome(arena, approx),
        "error_bound": format_rational(bound),
        "invariants": "ok" if not problems else problems[0],
    }
    print(json.dumps(summary, sort_keys=True))
    return OK if not problems else VIOLATION


def _describe_outcome(arena, approx):
    if arena.tag == "function":
        return f"<function on {len(approx.values)} cylinders>"
    if arena.tag == "hyperspace":
        return f"<set of {len(approx)} points>"
    return arena.encode(approx)


# --- analyze -------------------------------------------------------------------


def _load_transcript(path: Path):
    try:
        return loads_transcript(path.read_text())
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigurationError(f"cannot read transcript {path}: {exc}") from None


def _net_role(t) -> str:
    for rnd in t.rounds[:1]:
        if rnd.alice_meta and "generation" in rnd.alice_meta:
            return ALICE
        if rnd.bob_meta and "generation" in rnd.bob_meta:
            return BOB
    raise ConfigurationError("transcript was not produced by a hyperspace net strategy")


def _emit(report: dict, out: Optional[Path]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if out:
        out.write_text(text + "\n")
    print(text)


def _dyadic_range(spec: str) -> list:
    try:
        a, b = (int(v) for v in spec.split(".."))
    except ValueError:
        raise ConfigurationError(f"scale range must look like a..b, got {spec!r}") from None
    return analysis.dyadic_scales(a, b)


def run_analyze(args) -> int:
    t = _load_transcript(args.input)
    if args.report == "frequency":
        if t.arena.tag != "line":
            raise ConfigurationError("frequency reports need a line transcript")
        role = args.role or ALICE
        rep = digits.frequency_report(t, args.digit, args.burn_in)
        rows = digits.digit_ledger(t, args.digit, role)
        certs = digits.run_certificates(t, role)
        report = rep.as_dict()
        report.update({
            "role": role,
            "ledger_bound": rows[-1].forced if rows else 0,
            "ledger_pass": all(r.holds for r in rows),
            "certificates_pass": not certs,
        })
        _emit(report, args.out)
        return OK if report["ledger_pass"] and not certs else VIOLATION
    if args.report == "covering":
        if args.checks is None:
            raise ConfigurationError("--checks is required for covering reports")
        role = args.role or _net_role(t)
        try:
            raw = json.loads(args.checks.read_text())
            checks = [(c["n"], c["m"], [parse_rational(v) for v in c["x"]], parse_rational(c["R"])) for c in raw]
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"cannot read checks {args.checks}: {exc}") from None
        results = hyperspace.verify_covering_bounds(t, checks, role)
        _emit({"role": role, "checks": [c.as_dict() for c in results]}, args.out)
        return OK if all(c.passed for c in results) else VIOLATION
    if args.report == "branching":
        if t.arena.tag != "function":
            raise ConfigurationError("branching reports need a function-arena transcript")
        rep = function_game.verify_branching(t)
        _emit(rep.as_dict(), args.out)
        return OK if rep.passed else VIOLATION
    points = _outcome_points(t)
    return _dimension_report(points, args.report, args.scales or "1..10", args.out)


def _outcome_points(t):
    if t.arena.tag == "hyperspace":
        return hyperspace.outcome_set(t)
    if t.arena.tag == "function":
        return function_game.image_points(t)
    raise ConfigurationError("slope/local reports need a hyperspace or function transcript")


def _dimension_report(points, kind: str, scales_spec: str, out) -> int:
    scales = _dyadic_range(scales_spec)
    if kind == "slope":
        profile = analysis.covering_profile(points, scales)
        rep = analysis.dimension_slope(profile)
        _emit({"profile": profile.as_dict(), "fit": rep.as_dict()}, out)
    else:
        pairs = [(R, r) for i, R in enumerate(scales) for r in scales[i + 1 :]]
        rep = analysis.localized_ratio_extrema(points, pairs)
        _emit(rep.as_dict(), out)
    return OK


def run_dimension(args) -> int:
    try:
        obj = json.loads(args.input.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read {args.input}: {exc}") from None
    if isinstance(obj, list):
        points = [[parse_rational(c) for c in (p if isinstance(p, list) else [p])] for p in obj]
    else:
        points = _outcome_points(loads_transcript(json.dumps(obj)))
    return _dimension_report(points, args.report, args.scales, args.out)


# --- the rest -------------------------------------------------------------------


def run_verify(args) -> int:
    if args.suite not in SUITES:
        raise ConfigurationError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    samples = args.samples if args.samples is not None else args.queries
    result = run_suite(args.suite, args.seed, samples)
    for prop in result.properties:
        print(prop.line())
    return OK if result.passed else VIOLATION


def run_moran(args) -> int:
    depth = len(args.digits) if args.depth is None else args.depth
    m = analysis.moran_set_from_digits(args.digits, depth)
    report = {"depth": depth, "zeros": m.zeros, "count": m.count}
    if depth:
        report["slope"] = format_rational(m.slope)
    _emit(report, None)
    return OK


def run_porosity(args) -> int:
    import random

    from .verify import porosity_queries

    F = analysis.build_porous_set(args.alpha, args.beta, args.depth)
    worst = None
    for x, r in porosity_queries(F, args.queries, random.Random(f"porosity:{args.seed}")):
        w = analysis.porous_witness(F, x, r)
        if w.check(F):
            raise InvariantViolation(f"witness for x={x}, r={r} fails: {w.check(F)}")
        if worst is None or w.ratio() < worst.ratio():
            worst = w
    _emit({
        "epsilon": format_rational(F.epsilon),
        "queries": args.queries,
        "min_ratio": format_rational(worst.ratio()),
        "worst": worst.as_dict(),
        "pass": worst.ratio() >= F.epsilon,
    }, None)
    return OK


COMMANDS = {
    "play": run_play,
    "analyze": run_analyze,
    "verify": run_verify,
    "moran": run_moran,
    "porosity": run_porosity,
    "dimension": run_dimension,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else CONFIG
    try:
        return COMMANDS[args.command](args)
    except (InvariantViolation, IllegalMoveError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return VIOLATION
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return CONFIG


if __name__ == "__main__":
    sys.exit(main())
