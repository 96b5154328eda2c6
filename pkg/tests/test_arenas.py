from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import point_sets
from schmidtgame.arenas import (
    CylinderFunction,
    FunctionArena,
    HyperspaceArena,
    PointSet,
    all_words,
    cylinder_interval,
    distance,
    function_distance,
    hausdorff_distance,
    make_arena,
    random_legal_move,
    refine_cylinders,
)
from schmidtgame.core import BOB, Ball, GameParams, Turn, legal_move
from schmidtgame.errors import ConfigurationError
from schmidtgame.verify import brute_force_hausdorff


def test_distance_examples():
    assert distance(F(0), F(3, 4)) == F(3, 4)
    assert distance((F(0), F(0)), (F(1, 2), F(1, 3))) == F(1, 2)
    f = CylinderFunction({"0": [0], "1": [1]})
    g = CylinderFunction({"0": [F(1, 4)], "1": [1]})
    assert function_distance(f, g) == F(1, 4)


def test_hausdorff_examples():
    assert hausdorff_distance(PointSet([(F(0),)]), PointSet([(F(0),), (F(1),)])) == 1
    A = PointSet([(F(1, 3),), (F(1, 5),)])
    assert hausdorff_distance(A, A) == 0
    assert hausdorff_distance(PointSet([(F(0),), (F(1),)]), PointSet([(F(1, 2),)])) == F(1, 2)


@settings(max_examples=200, deadline=None)
@given(point_sets(dim=1), point_sets(dim=1))
def test_hausdorff_matches_brute_force_1d(A, B):
    assert hausdorff_distance(A, B) == brute_force_hausdorff(A, B)


@settings(max_examples=100, deadline=None)
@given(point_sets(dim=2), point_sets(dim=2))
def test_hausdorff_matches_brute_force_2d(A, B):
    assert hausdorff_distance(A, B) == brute_force_hausdorff(A, B)


@settings(max_examples=100, deadline=None)
@given(point_sets(dim=2), point_sets(dim=2))
def test_adding_points_bound(A, B):
    union = PointSet(A.points + B.points)
    one_sided = max(min(max(abs(a - b) for a, b in zip(p, q)) for q in A.points) for p in B.points)
    assert hausdorff_distance(union, A) <= one_sided


@settings(max_examples=100, deadline=None)
@given(point_sets(dim=1), point_sets(dim=1), point_sets(dim=1))
def test_hausdorff_triangle(A, B, C):
    assert hausdorff_distance(A, C) <= hausdorff_distance(A, B) + hausdorff_distance(B, C)


def test_point_set_dedupes_and_validates():
    s = PointSet([(F(1, 2),), (F(1, 2),), (F(0),)])
    assert len(s) == 2 and s.points == ((F(0),), (F(1, 2),))
    with pytest.raises(ConfigurationError):
        PointSet([])
    with pytest.raises(ConfigurationError):
        HyperspaceArena(1).validate(PointSet([(F(3, 2),)]))


def test_refine_examples():
    zero = CylinderFunction.constant([0])
    r = refine_cylinders(zero, 2)
    assert set(r.values) == set(all_words(2)) and all(v == (0,) for v in r.values.values())
    assert function_distance(r, zero) == 0
    f = CylinderFunction({"0": [0], "1": [1]})
    assert refine_cylinders(f, 2).values == {"00": (0,), "01": (0,), "10": (1,), "11": (1,)}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.randoms(use_true_random=False))
def test_refine_preserves_distance(df, dg, rnd):
    f = CylinderFunction({w: (F(rnd.randint(0, 8), 8),) for w in all_words(df)})
    g = CylinderFunction({w: (F(rnd.randint(0, 8), 8),) for w in all_words(dg)})
    k = max(df, dg) + 1
    assert function_distance(f, g) == function_distance(refine_cylinders(f, k), refine_cylinders(g, k))


def test_partition_checks():
    with pytest.raises(ConfigurationError):
        CylinderFunction({"0": [0], "01": [1], "1": [0]})
    with pytest.raises(ConfigurationError):
        CylinderFunction({"0": [0]})
    mixed = CylinderFunction({"0": [0], "10": [1], "11": [2]})
    assert mixed.value_at("101") == (1,) and mixed.depth == 2


def test_cylinder_interval():
    assert cylinder_interval("") == (0, 1)
    assert cylinder_interval("1") == (F(2, 3), 1)
    assert cylinder_interval("01") == (F(2, 9), F(1, 3))


def test_function_encoding_round_trip():
    arena = FunctionArena(1)
    f = CylinderFunction({"0": [F(1, 3)], "10": [1], "11": [F(-2, 7)]})
    assert arena.decode(arena.encode(f)) == f


@pytest.mark.parametrize("tag, dim", [("line", 1), ("box", 2), ("hyperspace", 1), ("hyperspace", 2), ("function", 1)])
def test_random_moves_are_legal_and_deterministic(tag, dim):
    arena = make_arena(tag, dim)
    params = GameParams(F(1, 2), F(1, 3), F(1))
    prev = Ball(arena.random_point(random.Random(1)), F(1, 2))

    def moves(seed):
        rng = random.Random(seed)
        out = []
        for _ in range(5):
            turn = Turn(BOB, 1, params, arena, F(1, 6), prev, (), rng)
            out.append(random_legal_move(turn))
        return out

    first = moves(9)
    assert all(legal_move(BOB, prev, b, params, arena) for b in first)
    assert [arena.encode(b.center) for b in first] == [arena.encode(b.center) for b in moves(9)]


def test_zero_slack_returns_previous_center():
    arena = make_arena("line")
    params = GameParams(F(1, 2), F(1, 2), F(1))

    prev = Ball(F(1, 3), F(1, 2))
    turn = Turn(BOB, 1, params, arena, F(1, 4), prev, (), random.Random(0))
    # with slack forced to zero the move must not change the center
    from schmidtgame import arenas

    original = arenas.allowed_slack
    arenas.allowed_slack = lambda t: F(0)
    try:
        assert random_legal_move(turn).center == F(1, 3)
    finally:
        arenas.allowed_slack = original


def test_unknown_arena():
    with pytest.raises(ConfigurationError):
        make_arena("torus")
