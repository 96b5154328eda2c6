"""Schmidt (alpha, beta)-game engine.

The engine is arena-agnostic: it only needs a distance between centers. Every
rule check is the radius-sum criterion ``d(x, y) + s <= r`` evaluated in exact
rational arithmetic, so a transcript either satisfies the rules or play aborts.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

from .errors import ConfigurationError, IllegalMoveError
from .rational import as_rational, format_rational, parse_rational

ALICE = "alice"
BOB = "bob"
ROLES = (ALICE, BOB)


@dataclass(frozen=True)
class GameParams:
    alpha: Fraction
    beta: Fraction
    r0: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "r0"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not 0 < self.alpha < 1:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ConfigurationError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.r0 > 0:
            raise ConfigurationError(f"r0 must be positive, got {self.r0}")

    @property
    def ratio(self) -> Fraction:
        return self.alpha * self.beta


@dataclass(frozen=True)
class Ball:
    center: Any
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", as_rational(self.radius))
        if self.radius < 0:
            raise ConfigurationError("ball radius must be nonnegative")


@dataclass(frozen=True)
class Round:
    """Round ``n`` >= 1: Alice's ball A_n followed by Bob's ball B_n."""

    n: int
    alice: Ball
    bob: Ball
    alice_meta: Optional[dict] = None
    bob_meta: Optional[dict] = None


@dataclass(frozen=True)
class Transcript:
    params: GameParams
    arena: Any
    initial: Ball
    rounds: tuple = ()
    initial_meta: Optional[dict] = None

    @property
    def final_round(self) -> int:
        return len(self.rounds)

    def bob_ball(self, n: int) -> Ball:
        return self.initial if n == 0 else self.rounds[n - 1].bob

    def alice_ball(self, n: int) -> Ball:
        if n < 1:
            raise IndexError("Alice's first ball is A_1")
        return self.rounds[n - 1].alice

    def bob_meta(self, n: int) -> Optional[dict]:
        return self.initial_meta if n == 0 else self.rounds[n - 1].bob_meta

    def alice_meta(self, n: int) -> Optional[dict]:
        return self.rounds[n - 1].alice_meta

    def balls(self) -> list:
        """B_0, A_1, B_1, A_2, ... in play order."""
        out = [self.initial]
        for rnd in self.rounds:
            out.extend((rnd.alice, rnd.bob))
        return out


@dataclass
class Turn:
    """Everything a strategy may look at before moving.

    ``n`` is the round number (0 only for Bob's opening move) and ``radius``
    the radius the returned ball must have. ``previous`` is the ball the new
    one must nest inside (None for the opening).
    """

    role: str
    n: int
    params: GameParams
    arena: Any
    radius: Fraction
    previous: Optional[Ball]
    history: tuple
    rng: random.Random
    transcript: Optional[Transcript] = None


class Strategy:
    """Base class for strategies.

    Subclasses implement :meth:`move`; it may return a :class:`Ball` or a pair
    ``(Ball, meta)`` where ``meta`` is a JSON-compatible dict recorded in the
    transcript for later verification. ``reset`` is called once per game.
    """

    name = "strategy"

    def reset(self, params: GameParams, arena) -> None:
        pass

    def move(self, turn: Turn):
        raise NotImplementedError

    def __call__(self, turn: Turn):
        return self.move(turn)


class StayStrategy(Strategy):
    """Replays the previous center; always legal."""

    name = "stay"

    def __init__(self, start=None):
        self.start = start

    def move(self, turn):
        if turn.previous is None:
            center = self.start if self.start is not None else turn.arena.default_point()
            return Ball(center, turn.radius)
        return Ball(turn.previous.center, turn.radius)


def radius_schedule(params: GameParams, n: int) -> Fraction:
    if n < 0:
        raise ConfigurationError("round index must be nonnegative")
    return params.ratio**n * params.r0


def move_slack(role: str, previous: Ball, proposed: Ball, params: GameParams, arena=None) -> Fraction:
    """Exact slack ``allowed - used`` of the role's nesting inequality."""
    from .arenas import distance

    if role not in ROLES:
        raise ConfigurationError(f"unknown role {role!r}")
    dist = arena.distance(previous.center, proposed.center) if arena is not None else distance(
        previous.center, proposed.center
    )
    ratio = params.alpha if role == ALICE else params.beta
    return previous.radius - ratio * previous.radius - dist


def legal_move(role: str, previous_ball: Ball, proposed: Ball, params: GameParams, arena=None) -> bool:
    """True iff ``proposed`` is a legal reply to ``previous_ball`` for ``role``.

    Alice must satisfy d + alpha*r <= r, Bob d + beta*(alpha r) <= alpha r,
    where r is the radius of the ball being replied to; the proposed radius
    must equal the scheduled one.
    """
    ratio = params.alpha if role == ALICE else params.beta
    if role not in ROLES:
        raise ConfigurationError(f"unknown role {role!r}")
    if proposed.radius != ratio * previous_ball.radius:
        return False
    return move_slack(role, previous_ball, proposed, params, arena) >= 0


def _normalize(result):
    if isinstance(result, tuple):
        ball, meta = result
        return ball, meta
    return result, None


def _checked(role, n, turn, result, params, arena):
    ball, meta = _normalize(result)
    if not isinstance(ball, Ball):
        raise IllegalMoveError(n, role, None, f"strategy returned {type(ball).__name__}, not a Ball")
    if ball.radius != turn.radius:
        raise IllegalMoveError(n, role, None, f"radius {ball.radius} differs from scheduled {turn.radius}")
    try:
        arena.validate(ball.center)
    except ConfigurationError as exc:
        raise IllegalMoveError(n, role, None, f"center outside the arena: {exc}") from None
    if turn.previous is not None:
        slack = move_slack(role, turn.previous, ball, params, arena)
        if slack < 0:
            which = "d(x,y) + alpha r <= r" if role == ALICE else "d(y,x) + alpha beta r <= alpha r"
            raise IllegalMoveError(n, role, slack, f"violates {which}")
    return ball, meta


def play(
    params: GameParams,
    alice: Strategy,
    bob: Strategy,
    rounds: int,
    seed: int = 0,
    arena=None,
    on_move: Optional[Callable[[Turn, Ball], None]] = None,
) -> Transcript:
    """Play ``rounds`` complete rounds and return the transcript.

    Each role draws from its own ``random.Random`` seeded from ``seed`` so the
    same inputs always give the same transcript.
    """
    from .arenas import LineArena

    if rounds < 1:
        raise ConfigurationError("rounds must be >= 1")
    arena = arena if arena is not None else LineArena()
    rngs = {role: random.Random(f"{seed}:{role}") for role in ROLES}
    alice.reset(params, arena)
    bob.reset(params, arena)

    history: list = []
    opening = Turn(BOB, 0, params, arena, params.r0, None, (), rngs[BOB])
    initial, initial_meta = _checked(BOB, 0, opening, bob(opening), params, arena)
    history.append(initial)
    transcript = Transcript(params, arena, initial, (), initial_meta)
    done = []
    bob_ball = initial
    for n in range(1, rounds + 1):
        r_prev = radius_schedule(params, n - 1)
        turn = Turn(ALICE, n, params, arena, params.alpha * r_prev, bob_ball, tuple(history), rngs[ALICE], transcript)
        a_ball, a_meta = _checked(ALICE, n, turn, alice(turn), params, arena)
        history.append(a_ball)
        if on_move:
            on_move(turn, a_ball)
        turn = Turn(BOB, n, params, arena, params.ratio * r_prev, a_ball, tuple(history), rngs[BOB], transcript)
        b_ball, b_meta = _checked(BOB, n, turn, bob(turn), params, arena)
        history.append(b_ball)
        if on_move:
            on_move(turn, b_ball)
        done.append(Round(n, a_ball, b_ball, a_meta, b_meta))
        transcript = Transcript(params, arena, initial, tuple(done), initial_meta)
        bob_ball = b_ball
    return transcript


def outcome_approx(t: Transcript):
    """Center of the last Bob ball and the error bound r_n."""
    if t.final_round < 1:
        raise ConfigurationError("transcript has no completed round")
    return t.rounds[-1].bob.center, radius_schedule(t.params, t.final_round)


def check_transcript(t: Transcript) -> list:
    """Re-check every rule on a transcript; returns a list of failure strings."""
    failures = []
    params = t.params
    if t.initial.radius != params.r0:
        failures.append("B_0 radius differs from r0")
    prev = t.initial
    for rnd in t.rounds:
        r_prev = radius_schedule(params, rnd.n - 1)
        if rnd.alice.radius != params.alpha * r_prev:
            failures.append(f"round {rnd.n}: A radius off schedule")
        if rnd.bob.radius != params.ratio * r_prev:
            failures.append(f"round {rnd.n}: B radius off schedule")
        if move_slack(ALICE, prev, rnd.alice, params, t.arena) < 0:
            failures.append(f"round {rnd.n}: Alice inequality fails")
        if move_slack(BOB, rnd.alice, rnd.bob, params, t.arena) < 0:
            failures.append(f"round {rnd.n}: Bob inequality fails")
        prev = rnd.bob
    return failures


# --- JSON -----------------------------------------------------------------


def _ball_json(ball: Ball, arena) -> dict:
    return {"center": arena.encode(ball.center), "radius": format_rational(ball.radius)}


def _ball_from(obj: dict, arena) -> Ball:
    return Ball(arena.decode(obj["center"]), parse_rational(obj["radius"]))


def transcript_to_dict(t: Transcript) -> dict:
    arena = t.arena
    out = {
        "arena": arena.tag,
        "alpha": format_rational(t.params.alpha),
        "beta": format_rational(t.params.beta),
        "r0": format_rational(t.params.r0),
        "initial": _ball_json(t.initial, arena),
        "rounds": [],
    }
    out.update(arena.describe())
    if t.initial_meta is not None:
        out["initial_meta"] = t.initial_meta
    for rnd in t.rounds:
        row = {"n": rnd.n, "alice": _ball_json(rnd.alice, arena), "bob": _ball_json(rnd.bob, arena)}
        if rnd.alice_meta is not None:
            row["alice_meta"] = rnd.alice_meta
        if rnd.bob_meta is not None:
            row["bob_meta"] = rnd.bob_meta
        out["rounds"].append(row)
    return out


def transcript_from_dict(obj: dict) -> Transcript:
    from .arenas import arena_from_description

    try:
        arena = arena_from_description(obj)
        params = GameParams(parse_rational(obj["alpha"]), parse_rational(obj["beta"]), parse_rational(obj["r0"]))
        initial = _ball_from(obj["initial"], arena)
        rounds = tuple(
            Round(
                int(row["n"]),
                _ball_from(row["alice"], arena),
                _ball_from(row["bob"], arena),
                row.get("alice_meta"),
                row.get("bob_meta"),
            )
            for row in obj["rounds"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"malformed transcript: {exc}") from None
    for i, rnd in enumerate(rounds, start=1):
        if rnd.n != i:
            raise ConfigurationError(f"malformed transcript: round {i} labelled {rnd.n}")
    return Transcript(params, arena, initial, rounds, obj.get("initial_meta"))


def dumps_transcript(t: Transcript) -> str:
    return json.dumps(transcript_to_dict(t), sort_keys=True, separators=(",", ":"))


def loads_transcript(text: str) -> Transcript:
    return transcript_from_dict(json.loads(text))
