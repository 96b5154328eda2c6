from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schmidtgame.arenas import RandomStrategy
from schmidtgame.core import ALICE, BOB, GameParams, StayStrategy, check_transcript, play
from schmidtgame.digits import (
    DyadicInterval,
    RareDigitStrategy,
    alice_force_balanced,
    alice_force_digit,
    bob_force_rare_digit,
    digit,
    digit_ledger,
    dyadic_level,
    frequency_of_bits,
    frequency_report,
    ledger_normalizations,
    outcome_digits,
    predicted_bound,
    run_certificates,
    run_length,
)
from schmidtgame.errors import ConfigurationError


@pytest.mark.parametrize("r, k", [(F(1, 4), 2), (F(3, 10), 2), (F(1, 2), 1)])
def test_dyadic_level(r, k):
    assert dyadic_level(r) == k


@pytest.mark.parametrize(
    "k_n, alpha, r_n, expected",
    [
        (2, F(1, 16), F(1, 4), 2),
        # threshold 2*alpha*r = 1/16 and 2^-4 = 1/16 is not strictly larger,
        # so the run stops at 2 (a worked value of 3 would need ">=")
        (1, F(1, 16), F(1, 2), 2),
        (2, F(1, 32), F(1, 4), 3),
    ],
)
def test_run_length(k_n, alpha, r_n, expected):
    assert run_length(k_n, alpha, r_n) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 1000), st.integers(2, 1000))
def test_dyadic_level_brute_force(p, q):
    r = F(p, q)
    if not 0 < r < 1:
        return
    k = next(k for k in range(64) if F(1, 2**k) <= r)
    assert dyadic_level(r) == k


@settings(max_examples=200, deadline=None)
@given(st.integers(9, 64), st.integers(1, 12))
def test_run_length_brute_force(inv_alpha, level):
    alpha = F(1, inv_alpha)
    r = F(1, 2**level)
    expected = max(k for k in range(80) if k == 0 or F(1, 2 ** (level + k)) > 2 * alpha * r)
    assert run_length(level, alpha, r, allow_zero=True) == expected


def test_dyadic_interval():
    I = DyadicInterval(3, 5)
    assert I.length == F(1, 8) and (I.left, I.right) == (F(5, 8), F(3, 4))
    a, b = I.children()
    assert a.left == I.left and b.right == I.right and a.right == b.left
    assert I.descendant(2, rightmost=True) == DyadicInterval(5, 23)


def test_digit_uses_maximal_expansion():
    # 1/2 = 0.1000... under the lexicographically maximal convention
    assert [digit(F(1, 2), i) for i in range(1, 5)] == [1, 0, 0, 0]
    assert [digit(F(1, 3), i) for i in range(1, 7)] == [0, 1, 0, 1, 0, 1]


def test_alice_requires_small_alpha():
    with pytest.raises(ConfigurationError):
        alice_force_digit(0, GameParams(F(1, 4), F(1, 2), F(1)))


def test_force_digit_vs_stay_bob():
    p = GameParams(F(1, 16), F(1, 2), F(1, 4))
    t = play(p, alice_force_digit(0, p), StayStrategy(F(1, 3)), 3)
    assert check_transcript(t) == [] and run_certificates(t, ALICE) == []


@pytest.mark.parametrize("j", [0, 1])
def test_forced_runs_and_ledger(j):
    p = GameParams(F(1, 16), F(1, 2), F(1, 2))
    t = play(p, alice_force_digit(j, p), RandomStrategy(), 60, seed=3)
    assert run_certificates(t, ALICE) == []
    rows = digit_ledger(t, j, ALICE)
    assert rows and all(row.holds for row in rows)
    bits = outcome_digits(t)
    for rnd in t.rounds:
        k, l = rnd.alice_meta["k"], rnd.alice_meta["l"]
        if k is None or k + l > len(bits):
            continue
        # run length never drops below floor(-log2(8 alpha)) = 1
        assert l >= 1
        assert set(bits[k : k + l]) == {str(j)}


def test_normalizations_reported():
    p = GameParams(F(1, 16), F(1, 2), F(1, 2))
    t = play(p, alice_force_digit(0, p), RandomStrategy(), 20, seed=1)
    norms = ledger_normalizations(t, 0)
    assert norms and all(0 <= n["forced_over_next_k"] <= 1 for n in norms)


def test_balanced_alternates():
    p = GameParams(F(1, 16), F(1, 2), F(1, 2))
    t = play(p, alice_force_balanced(p), RandomStrategy(), 40, seed=2)
    assert run_certificates(t, ALICE) == []
    for rnd in t.rounds:
        meta = rnd.alice_meta
        if meta.get("l") and not meta.get("override"):
            assert meta["digit"] == (rnd.n - 1) % 2
    bits = outcome_digits(t)
    assert "0" in bits[-50:] and "1" in bits[-50:]


def test_frequency_report_partition_and_stay_game():
    p = GameParams(F(1, 2), F(1, 2), F(1, 4))
    t = play(p, StayStrategy(), StayStrategy(F(1, 3)), 12)
    bits = outcome_digits(t)
    r0, r1 = frequency_report(t, 0), frequency_report(t, 1)
    assert r0.count + r1.count == r0.k == len(bits)


def test_frequency_of_bits_running_window():
    rep = frequency_of_bits("0011", 0, burn_in=2)
    assert rep.count == 2 and rep.max_running == 1 and rep.min_running == F(1, 2)


def test_predicted_bounds():
    assert predicted_bound("alice", F(1, 16), F(1, 2)) == F(1, 5)
    assert predicted_bound("bob", F(1, 4), F(1, 2)) == F(1, 3)
    assert predicted_bound("alice", F(1, 8), F(1, 3)) == 0
    iv = predicted_bound("alice", F(1, 10), F(1, 2))
    assert isinstance(iv, mpmath.ctx_iv.ivmpf) and iv.a < mpmath.log(F(8, 10)) / mpmath.log(F(1, 20)) < iv.b


def test_bob_beta_search():
    beta, strat = bob_force_rare_digit(0, F(1, 2), F(1, 4))
    assert beta == F(1, 2) and isinstance(strat, RareDigitStrategy)
    beta, _ = bob_force_rare_digit(0, F(1, 2), F(1, 4), sound=True)
    assert beta < F(1, 8) and predicted_bound("bob", F(1, 4), beta, sound=True) <= F(1, 2)


def test_bob_opens_at_one():
    p = GameParams(F(1, 4), F(1, 256), F(1))
    t = play(p, RandomStrategy(), RareDigitStrategy(0), 3, seed=0)
    assert t.initial.center == 1 and t.initial.radius == 1


def test_bob_rare_digit_sound_regime():
    alpha, eps = F(1, 4), F(1, 2)
    beta, bob = bob_force_rare_digit(0, eps, alpha, sound=True)
    p = GameParams(alpha, beta, F(1))
    t = play(p, RandomStrategy(), bob, 40, seed=5)
    assert run_certificates(t, BOB) == []
    assert all(row.holds for row in digit_ledger(t, 0, BOB))
    for rnd in t.rounds:
        if rnd.bob_meta.get("l"):
            assert rnd.bob_meta["digit"] == 1


def test_bob_sound_regime_meets_frequency_bound():
    # with the sound beta the suppression bound holds where beta = 1/2 does not
    alpha, eps = F(1, 4), F(1, 2)
    beta, _ = bob_force_rare_digit(0, eps, alpha, sound=True)
    for seed in range(5):
        _, bob = bob_force_rare_digit(0, eps, alpha, sound=True)
        t = play(GameParams(alpha, beta, F(1)), RandomStrategy(), bob, 100, seed=seed)
        assert frequency_report(t, 0).max_running <= F(1, 3) + F(5, 100)
