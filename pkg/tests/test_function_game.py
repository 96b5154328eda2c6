from fractions import Fraction as F

import pytest

from schmidtgame.arenas import FunctionArena, RandomStrategy, function_distance
from schmidtgame.core import GameParams, check_transcript, play
from schmidtgame.errors import ConfigurationError
from schmidtgame.function_game import (
    build_color_set,
    fat_image_strategy,
    image_points,
    point_value,
    verify_branching,
)


def test_color_set_examples():
    S = build_color_set(F(1, 20), 1)
    assert S.points == ((F(-1, 4),), (F(0),), (F(1, 4),)) and S.N == 3
    S = build_color_set(F(1, 10), 1)
    assert S.points == ((F(-1, 4),), (F(1, 4),)) and S.N == 2


@pytest.mark.parametrize("alpha, d", [(F(1, 20), 2), (F(1, 30), 1), (F(1, 10), 3)])
def test_color_set_contract(alpha, d):
    S = build_color_set(alpha, d)
    S.validate()
    assert S.N == (int(1 / (10 * alpha)) + 1) ** d
    assert all(abs(c) <= F(1, 4) for p in S.points for c in p)


@pytest.mark.parametrize("alpha", [F(1, 8), F(1, 9)])
def test_color_set_rejects_large_alpha(alpha):
    with pytest.raises(ConfigurationError):
        build_color_set(alpha, 1)


def play_fat(rounds, seed=0, d=1, alpha=F(1, 20)):
    p = GameParams(alpha, F(1, 2), F(1))
    return play(p, fat_image_strategy(p, d), RandomStrategy(), rounds, seed=seed, arena=FunctionArena(d))


def test_round_one_values():
    t = play_fat(1)
    g = t.initial.center
    meta = t.rounds[0].alice_meta
    f = t.rounds[0].alice.center
    (x0,) = point_value(g, "")
    r0 = t.params.r0
    values = sorted(point_value(f, w)[0] for w in meta["E"])
    assert len(meta["E"]) == 3
    assert values == [x0 - r0 / 4, x0, x0 + r0 / 4]


@pytest.mark.parametrize("seed", range(3))
def test_alice_moves_within_half_radius(seed):
    t = play_fat(5, seed=seed)
    assert check_transcript(t) == []
    prev = t.initial
    for rnd in t.rounds:
        assert function_distance(rnd.alice.center, prev.center) <= prev.radius / 2
        prev = rnd.bob


@pytest.mark.parametrize("seed", range(3))
def test_verify_branching_passes(seed):
    t = play_fat(6, seed=seed)
    rep = verify_branching(t)
    assert rep.passed, rep.failures
    assert rep.cardinalities == [3**n for n in range(7)]
    assert rep.final_count == 3**6


def test_two_dimensional_images():
    t = play_fat(3, d=2, alpha=F(1, 10))
    rep = verify_branching(t)
    assert rep.passed and rep.N == 4 and len(image_points(t)) == 4**3


def test_verify_branching_detects_tampering():
    t = play_fat(3)
    meta = t.rounds[-1].alice_meta
    meta["E"] = meta["E"][:-1]
    rep = verify_branching(t)
    assert not rep.passed and "#E" in rep.failures[0]
