from fractions import Fraction as F

import pytest

from schmidtgame.arenas import HyperspaceArena, PointSet, RandomStrategy, hausdorff_distance
from schmidtgame.core import ALICE, BOB, GameParams, StayStrategy, check_transcript, legal_move, play
from schmidtgame.errors import ConfigurationError
from schmidtgame.geometry import box_distance
from schmidtgame.hyperspace import (
    branching_strategy,
    leaf_count,
    mover_generations,
    outcome_set,
    sample_covering_checks,
    separated_net,
    thinning_strategy,
    verify_covering_bounds,
    verify_net_transcript,
)

ARENA = HyperspaceArena(1)


def pts(*xs):
    return PointSet((F(x),) for x in xs)


def test_separated_net_examples():
    assert separated_net(pts(0), F(1, 4), F(1, 2)) == pts(0)
    assert separated_net(pts(0, F(1, 10), 1), F(1, 4), F(1, 2)) == pts(0, 1)


def test_separated_net_rejects_small_cover():
    with pytest.raises(ConfigurationError):
        separated_net(pts(0), F(1, 4), F(1, 3))


@pytest.mark.parametrize("seed", range(5))
def test_separated_net_maximal_and_covering(seed):
    import random

    rng = random.Random(seed)
    K = PointSet((F(rng.randint(0, 200), 200), F(rng.randint(0, 200), 200)) for _ in range(60))
    sep = F(1, 10)
    net = separated_net(K, sep, 2 * sep)
    P = net.points
    assert all(box_distance(p, q) > sep for i, p in enumerate(P) for q in P[i + 1 :])
    # maximal: every point of K is within sep of the net, hence cannot be added
    assert all(min(box_distance(k, p) for p in P) <= sep for k in K.points)


def test_branching_feasibility():
    with pytest.raises(ConfigurationError, match="alpha"):
        branching_strategy(ALICE, GameParams(F(1, 4), F(1, 2), F(1)))
    with pytest.raises(ConfigurationError, match="beta"):
        branching_strategy(BOB, GameParams(F(1, 2), F(1, 4), F(1)))
    with pytest.raises(ConfigurationError):
        thinning_strategy(ALICE, GameParams(F(1, 4), F(1, 2), F(1)))


def alice_branching(rounds=6, seed=0):
    p = GameParams(F(1, 8), F(1, 2), F(1))
    return play(p, branching_strategy(ALICE, p), RandomStrategy(3), rounds, seed=seed, arena=ARENA)


@pytest.mark.parametrize("seed", range(3))
def test_alice_branching_structure(seed):
    t = alice_branching(seed=seed)
    assert verify_net_transcript(t, ALICE) == []
    gens = mover_generations(t, ALICE)
    M = len(gens[0].points)
    # the first move is a net of Bob's set, every later move doubles each anchor
    assert leaf_count(t, ALICE) >= M * 2 ** (len(gens) - 1)
    assert check_transcript(t) == []


def test_alice_moves_have_slack():
    t = alice_branching()
    prev = t.initial
    for rnd in t.rounds:
        assert legal_move(ALICE, prev, rnd.alice, t.params, ARENA)
        d = hausdorff_distance(rnd.alice.center, prev.center)
        assert d < (1 - t.params.alpha) * prev.radius
        prev = rnd.bob


def test_bob_branching_children_from_singleton():
    p = GameParams(F(1, 2), F(1, 8), F(1))
    t = play(p, StayStrategy(), branching_strategy(BOB, p), 1, arena=ARENA)
    assert t.initial.center == pts(F(1, 2))
    s = (1 - p.beta) * p.alpha * p.r0
    assert t.rounds[0].bob.center == pts(F(1, 2) - s / 2, F(1, 2) + s / 2)


def test_covering_degenerate_and_three_levels():
    t = alice_branching(rounds=9)
    K = outcome_set(t)
    gens = mover_generations(t, ALICE)
    for n in range(len(gens)):
        (c,) = verify_covering_bounds(t, [(n, n, K.points[0], F(1, 2))], ALICE)
        assert c.bound == 1 and c.passed
    m, n = 4, 7
    anchor = gens[m].points.points[0]
    (c,) = verify_covering_bounds(t, [(n, m, anchor, 2 * gens[m].radius)], ALICE)
    assert c.bound == 8 and c.measured >= 8


def test_covering_check_index_errors():
    t = alice_branching(rounds=3)
    with pytest.raises(ConfigurationError):
        verify_covering_bounds(t, [(9, 0, (F(0),), F(1))], ALICE)


@pytest.mark.parametrize("seed", range(3))
def test_sampled_branching_bounds(seed):
    t = alice_branching(rounds=8, seed=seed)
    checks = verify_covering_bounds(t, sample_covering_checks(t, ALICE, 20, seed), ALICE)
    assert all(c.passed for c in checks)


def bob_thinning(rounds=6, seed=0):
    p = GameParams(F(1, 4), F(1, 8), F(1))
    return play(p, RandomStrategy(3), thinning_strategy(BOB, p), rounds, seed=seed, arena=ARENA)


def test_thinning_step_bound_is_six():
    t = bob_thinning()
    gens = mover_generations(t, BOB)
    assert gens[-1].meta["step_bound"] == 6
    assert verify_net_transcript(t, BOB) == []


@pytest.mark.parametrize("seed", range(3))
def test_thinning_descendants_bounded_by_product(seed):
    t = bob_thinning(rounds=5, seed=seed)
    gens = mover_generations(t, BOB)
    # follow parent pointers from generation 5 back to generation 0
    owner = list(range(len(gens[0].points)))
    for gen in gens[1:6]:
        owner = [owner[p] for p in gen.meta["parents"]]
    tally = {}
    for o in owner:
        tally[o] = tally.get(o, 0) + 1
    assert max(tally.values()) <= 6**5


@pytest.mark.parametrize("seed", range(3))
def test_sampled_thinning_bounds(seed):
    t = bob_thinning(rounds=7, seed=seed)
    checks = verify_covering_bounds(t, sample_covering_checks(t, BOB, 20, seed), BOB)
    assert all(c.passed and c.kind == "upper" for c in checks)


def test_alice_thinning_first_move_legal():
    p = GameParams(F(1, 8), F(1, 2), F(1))
    t = play(p, thinning_strategy(ALICE, p), RandomStrategy(4), 4, seed=1, arena=ARENA)
    assert check_transcript(t) == [] and verify_net_transcript(t, ALICE) == []


def test_strategy_role_mismatch():
    p = GameParams(F(1, 8), F(1, 2), F(1))
    with pytest.raises(ConfigurationError):
        play(p, RandomStrategy(), branching_strategy(ALICE, p), 2, arena=ARENA)
