"""Binary digit-frequency game on the line.

Alice forces runs of a chosen digit by nesting her ball inside the extremal
dyadic sub-interval of a dyadic interval that fits in Bob's ball; Bob can use
the mirrored construction to make a digit rare.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .core import ALICE, BOB, Ball, GameParams, Strategy, Transcript, Turn
from .errors import ConfigurationError, InvariantViolation
from .rational import as_rational, exact_log2


@dataclass(frozen=True)
class DyadicInterval:
    """[index * 2**-level, (index + 1) * 2**-level]."""

    level: int
    index: int

    @property
    def length(self) -> Fraction:
        return Fraction(1, 2**self.level)

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, 2**self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, 2**self.level)

    @property
    def center(self) -> Fraction:
        return Fraction(2 * self.index + 1, 2 ** (self.level + 1))

    def children(self) -> tuple:
        return DyadicInterval(self.level + 1, 2 * self.index), DyadicInterval(self.level + 1, 2 * self.index + 1)

    def descendant(self, extra: int, rightmost: bool) -> "DyadicInterval":
        base = self.index << extra
        return DyadicInterval(self.level + extra, base + (2**extra - 1 if rightmost else 0))

    def contains(self, lo: Fraction, hi: Fraction) -> bool:
        return self.left <= lo and hi <= self.right


def dyadic_level(r: Fraction) -> int:
    """Smallest k with 2**-k <= r, for 0 < r < 1."""
    r = as_rational(r)
    if not 0 < r < 1:
        raise ConfigurationError(f"dyadic_level needs 0 < r < 1, got {r}")
    # 2**-k <= p/q  iff  p * 2**k >= q; start just below the answer
    p, q = r.numerator, r.denominator
    k = max(0, q.bit_length() - p.bit_length() - 1)
    while p << k < q:
        k += 1
    return k


def run_length(k_n: int, alpha: Fraction, r_n: Fraction, allow_zero: bool = False) -> int:
    """Largest k with 2**-(k_n+k) > 2*alpha*r_n (strict)."""
    alpha, r_n = as_rational(alpha), as_rational(r_n)
    if Fraction(1, 2**k_n) > r_n:
        raise ConfigurationError(f"level {k_n} intervals do not fit radius {r_n}")
    threshold = 2 * alpha * r_n
    k = 0
    while Fraction(1, 2 ** (k_n + k + 1)) > threshold:
        k += 1
    if k == 0 and not allow_zero:
        raise ConfigurationError(
            f"no run of length >= 1: 2^-{k_n + 1} <= 2*alpha*r = {threshold}; the forcing needs 8*alpha < 1"
        )
    return k


def digit(x: Fraction, i: int) -> int:
    """i-th binary digit (i >= 1) of x, lexicographically maximal expansion."""
    return math.floor(x * 2**i) % 2


def leftmost_dyadic_inside(center: Fraction, radius: Fraction, level: int) -> DyadicInterval:
    lo = center - radius
    index = math.ceil(lo * 2**level)
    interval = DyadicInterval(level, index)
    if interval.right > center + radius:
        raise InvariantViolation(f"no level-{level} dyadic interval inside B({center}, {radius})")
    return interval


def determined_prefix(center: Fraction, radius: Fraction, limit: int = 100_000) -> tuple:
    """(k, bits) where every point of [c-r, c+r] shares its first k digits ``bits``."""
    lo, hi = center - radius, center + radius
    k = 0
    while k < limit and math.floor(lo * 2 ** (k + 1)) == math.floor(hi * 2 ** (k + 1)):
        k += 1
    if k == 0:
        return 0, ""
    word = math.floor(lo * 2**k) % 2**k
    return k, format(word, f"0{k}b")


def _forced_ball(center, radius, new_radius, digit_j, ratio):
    """Shared forcing construction: returns (ball center, meta)."""
    k = dyadic_level(radius)
    base = leftmost_dyadic_inside(center, radius, k)
    l = run_length(k, ratio, radius, allow_zero=True)
    target = base.descendant(l, rightmost=digit_j == 1)
    return target, {"k": k, "l": l, "digit": digit_j, "level": target.level, "index": target.index}


class ForceDigitStrategy(Strategy):
    """Alice: every round forces digits k_n+1 .. k_n+l_n of the outcome to ``digit``.

    Rounds are labelled with the digit they force; subclasses override
    :meth:`target_digit` to interleave digits.
    """

    name = "force-digit"

    def __init__(self, digit_j: int):
        if digit_j not in (0, 1):
            raise ConfigurationError("digit must be 0 or 1")
        self.digit_j = digit_j
        self.last_digit: Optional[int] = None

    def reset(self, params, arena):
        if params.alpha >= Fraction(1, 8):
            raise ConfigurationError(f"digit forcing needs alpha < 1/8, got alpha = {params.alpha}")
        if arena.tag != "line":
            raise ConfigurationError("digit strategies play on the line arena")
        self.last_digit = None

    def target_digit(self, n: int) -> tuple:
        return self.digit_j, False

    def move(self, turn: Turn):
        prev = turn.previous
        if prev is None:
            raise ConfigurationError("digit strategies play Alice; Bob opens the game")
        r = prev.radius
        if r >= 1:
            # stall until the dyadic construction applies
            return Ball(prev.center, turn.radius), {"k": None, "l": 0, "digit": None, "stall": True}
        digit_j, override = self.target_digit(turn.n)
        target, meta = _forced_ball(prev.center, r, turn.radius, digit_j, turn.params.alpha)
        if meta["l"] < 1:
            raise InvariantViolation(f"round {turn.n}: run length 0 although alpha < 1/8")
        meta["override"] = override
        self.last_digit = digit_j
        return Ball(target.center, turn.radius), meta


class BalancedStrategy(ForceDigitStrategy):
    """Alternates forced digits 0, 1, 0, ...; every 10th round forces the
    digit opposite to the previous forced run."""

    name = "balanced"
    override_period = 10

    def __init__(self):
        super().__init__(0)

    def target_digit(self, n):
        if n % self.override_period == 0 and self.last_digit is not None:
            return 1 - self.last_digit, True
        return (n - 1) % 2, False


def alice_force_digit(digit_j: int, params: Optional[GameParams] = None) -> ForceDigitStrategy:
    if params is not None and params.alpha >= Fraction(1, 8):
        raise ConfigurationError(f"digit forcing needs alpha < 1/8, got alpha = {params.alpha}")
    return ForceDigitStrategy(digit_j)


def alice_force_balanced(params: Optional[GameParams] = None) -> BalancedStrategy:
    if params is not None and params.alpha >= Fraction(1, 8):
        raise ConfigurationError(f"digit forcing needs alpha < 1/8, got alpha = {params.alpha}")
    return BalancedStrategy()


class RareDigitStrategy(Strategy):
    """Bob: opens at x_0 = 1 and forces runs of the complementary digit."""

    name = "rare-digit"

    def __init__(self, digit_j: int, start: Fraction = Fraction(1)):
        if digit_j not in (0, 1):
            raise ConfigurationError("digit must be 0 or 1")
        self.digit_j = digit_j
        self.start = as_rational(start)

    def reset(self, params, arena):
        if arena.tag != "line":
            raise ConfigurationError("digit strategies play on the line arena")

    def move(self, turn: Turn):
        prev = turn.previous
        if prev is None:
            return Ball(self.start, turn.radius), {"k": None, "l": 0, "digit": None, "opening": True}
        rho = prev.radius
        forced = 1 - self.digit_j
        if rho >= 1:
            return Ball(prev.center, turn.radius), {"k": None, "l": 0, "digit": None, "stall": True}
        target, meta = _forced_ball(prev.center, rho, turn.radius, forced, turn.params.beta)
        if meta["l"] >= 1:
            return Ball(target.center, turn.radius), meta
        # beta too large for a run: play the legal center closest to the target
        slack = (1 - turn.params.beta) * rho
        center = min(max(target.center, prev.center - slack), prev.center + slack)
        meta["fallback"] = True
        return Ball(center, turn.radius), meta


def _stated_bob_ok(alpha, beta, eps):
    # 1 - log(8b)/(-log(ab)) <= eps  <=>  (8b)^q >= (1/(ab))^(q-p)
    p, q = eps.numerator, eps.denominator
    return (8 * beta) ** q >= (1 / (alpha * beta)) ** (q - p)


def _sound_bob_ok(alpha, beta, eps):
    # beta < 1/8 and 1 - log(8b)/log(ab) <= eps  <=>  (8b)^q <= (ab)^(q-p)
    if beta >= Fraction(1, 8):
        return False
    p, q = eps.numerator, eps.denominator
    return (8 * beta) ** q <= (alpha * beta) ** (q - p)


def bob_force_rare_digit(digit_j: int, epsilon, alpha, sound: bool = False, max_exponent: int = 256):
    """Pick Bob's beta from {1/2, 1/4, ...} and return ``(beta, strategy)``.

    ``sound=False`` uses the target bound ``1 - log(8b)/(-log(ab)) <= eps``;
    ``sound=True`` uses ``1 - log(8b)/log(ab) <= eps`` with ``b < 1/8``, the
    form under which the run lengths are positive.
    """
    eps, alpha = as_rational(epsilon), as_rational(alpha)
    if not 0 < eps < 1:
        raise ConfigurationError(f"epsilon must lie in (0, 1), got {eps}")
    if not 0 < alpha < Fraction(1, 2):
        raise ConfigurationError(f"alpha must lie in (0, 1/2), got {alpha}")
    ok = _sound_bob_ok if sound else _stated_bob_ok
    for e in range(1, max_exponent + 1):
        beta = Fraction(1, 2**e)
        if ok(alpha, beta, eps):
            return beta, RareDigitStrategy(digit_j)
    raise ConfigurationError(
        f"no beta = 2^-e with e <= {max_exponent} meets the rare-digit bound for alpha={alpha}, eps={eps}"
    )


def predicted_bound(mode: str, alpha, beta, sound: bool = False):
    """Closed-form digit-frequency bound.

    ``alice``: log(8a)/log(ab), a lower bound on the liminf frequency.
    ``bob``: 1 - log(8b)/(-log(ab)) (``sound=True``: 1 - log(8b)/log(ab)), an
    upper bound on the limsup frequency. Returns a Fraction when both
    logarithm arguments are powers of two, otherwise an ``mpmath`` interval
    enclosing the value.
    """
    alpha, beta = as_rational(alpha), as_rational(beta)
    if not (0 < beta < 1):
        raise ConfigurationError("beta must lie in (0, 1)")
    if mode == "alice":
        if not 0 < alpha <= Fraction(1, 8):
            raise ConfigurationError("the Alice bound needs 0 < alpha <= 1/8")
        num, den = 8 * alpha, alpha * beta
    elif mode == "bob":
        if not 0 < alpha < Fraction(1, 2):
            raise ConfigurationError("the Bob bound needs 0 < alpha < 1/2")
        num, den = 8 * beta, alpha * beta
    else:
        raise ConfigurationError(f"mode must be 'alice' or 'bob', got {mode!r}")
    ln, ld = exact_log2(num), exact_log2(den)
    if ln == 0 or (ln is not None and ld is not None):
        ratio = Fraction(ln, ld) if ln else Fraction(0)
        if mode == "alice":
            return ratio
        return 1 - ratio if sound else 1 + ratio
    iv = mpmath.iv
    ratio = iv.log(iv.mpf(num.numerator) / num.denominator) / iv.log(iv.mpf(den.numerator) / den.denominator)
    if mode == "alice":
        return ratio
    return 1 - ratio if sound else 1 + ratio


# --- analysis --------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyReport:
    digit: int
    k: int
    count: int
    burn_in: int
    min_running: Fraction
    max_running: Fraction

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.count, self.k)

    def as_dict(self) -> dict:
        return {
            "digit": self.digit,
            "k": self.k,
            "count": self.count,
            "burn_in": self.burn_in,
            "frequency": float(self.frequency),
            "min_running": float(self.min_running),
            "max_running": float(self.max_running),
        }


def outcome_digits(t: Transcript) -> str:
    if t.arena.tag != "line":
        raise ConfigurationError("digit analysis needs a line-arena transcript")
    ball = t.rounds[-1].bob if t.rounds else t.initial
    return determined_prefix(ball.center, ball.radius)[1]


def frequency_report(t: Transcript, digit_j: int, burn_in: Optional[int] = None) -> FrequencyReport:
    """Finite-prefix frequency statistics of ``digit_j`` in the game's outcome."""
    bits = outcome_digits(t)
    return frequency_of_bits(bits, digit_j, burn_in)


def frequency_of_bits(bits: str, digit_j: int, burn_in: Optional[int] = None) -> FrequencyReport:
    k = len(bits)
    if k == 0:
        raise ConfigurationError("no digit of the outcome is determined yet")
    if burn_in is None:
        burn_in = max(1, k // 10)
    if not 1 <= burn_in <= k:
        raise ConfigurationError(f"burn-in {burn_in} outside [1, {k}]")
    ch = str(digit_j)
    count = 0
    lo = hi = None
    for i, b in enumerate(bits, start=1):
        count += b == ch
        if i >= burn_in:
            f = Fraction(count, i)
            lo = f if lo is None or f < lo else lo
            hi = f if hi is None or f > hi else hi
    return FrequencyReport(digit_j, k, count, burn_in, lo, hi)


@dataclass(frozen=True)
class LedgerRow:
    round: int
    k: int
    count: int
    forced: int
    holds: bool


def run_certificates(t: Transcript, role: str = ALICE) -> list:
    """Per-round check that the mover's ball sits in one dyadic interval whose
    forced digits all equal the target. Returns failure strings (empty = all pass)."""
    failures = []
    for rnd in t.rounds:
        meta = rnd.alice_meta if role == ALICE else rnd.bob_meta
        ball = rnd.alice if role == ALICE else rnd.bob
        if not meta or not meta.get("l"):
            continue
        k, l, j = meta["k"], meta["l"], meta["digit"]
        lo, hi = ball.center - ball.radius, ball.center + ball.radius
        level = k + l
        idx_lo, idx_hi = math.floor(lo * 2**level), math.floor(hi * 2**level)
        want = 0 if j == 0 else 2**l - 1
        if idx_lo != idx_hi:
            failures.append(f"round {rnd.n}: ball straddles level-{level} dyadic intervals")
        elif idx_lo % 2**l != want:
            failures.append(f"round {rnd.n}: digits {k + 1}..{level} are not all {j}")
    return failures


def digit_ledger(t: Transcript, digit_j: int, role: str = ALICE) -> list:
    """Ledger rows: count of ``digit_j`` in the first k_n outcome digits versus
    the runs forced before round n.

    For Alice (forcing ``digit_j``) a row holds when count >= forced; for Bob
    (suppressing ``digit_j``) when count <= k_n - forced. Rows beyond the
    determined prefix are omitted.
    """
    bits = outcome_digits(t)
    prefix_counts = [0]
    ch = str(digit_j)
    for b in bits:
        prefix_counts.append(prefix_counts[-1] + (b == ch))
    rows = []
    forced = 0
    for rnd in t.rounds:
        meta = rnd.alice_meta if role == ALICE else rnd.bob_meta
        if not meta or meta.get("k") is None:
            continue
        k = meta["k"]
        if k > len(bits):
            break
        count = prefix_counts[k]
        holds = count >= forced if role == ALICE else count <= k - forced
        rows.append(LedgerRow(rnd.n, k, count, forced, holds))
        target = digit_j if role == ALICE else 1 - digit_j
        if meta.get("digit") == target:
            forced += meta["l"]
    return rows


def ledger_normalizations(t: Transcript, digit_j: int, role: str = ALICE) -> list:
    """Both finite-n estimators: count(k_n)/k_n and forced/k_{n+1}."""
    rows = digit_ledger(t, digit_j, role)
    out = []
    for a, b in zip(rows, rows[1:]):
        out.append({"round": a.round, "count_over_k": Fraction(a.count, a.k), "forced_over_next_k": Fraction(b.forced, b.k)})
    return out
