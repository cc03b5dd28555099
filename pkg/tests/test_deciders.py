import json

import pytest

from allswitch import deciders
from allswitch.circuit import bitswitch_oracle, increment, prepare, set_bit
from allswitch.construction import build, build_optstrat
from allswitch.game import ParityGame


def two_step_game():
    # 0 -> {1, 2}; 1 leads to the sink with a big even priority on the way
    return ParityGame.from_lists(
        owner=(0, 0, 0, 0),
        priority=(1, 6, 3, 4),
        succ=[(0,), (0,), (0,), (1, 2)],
        sink=0,
    )


def test_edge_switch_yes_with_witness():
    g = two_step_game()
    v = deciders.edge_switch(g, {0: 0, 1: 0, 2: 0, 3: 2}, (3, 1))
    assert v.answer == deciders.YES and v.witness_iteration == 0
    assert deciders.replay_witness(g, {0: 0, 1: 0, 2: 0, 3: 2}, (3, 1), 0)


def test_edge_switch_no_at_fixpoint():
    g = two_step_game()
    v = deciders.edge_switch(g, {0: 0, 1: 0, 2: 0, 3: 1}, (3, 2))
    assert v.answer == deciders.NO and v.fixpoint and not v.budget_exhausted


def test_edge_switch_rejects_non_edges():
    with pytest.raises(ValueError):
        deciders.edge_switch(two_step_game(), {0: 0, 1: 0, 2: 0, 3: 1}, (1, 2))


def test_verdict_json():
    v = deciders.Verdict("edge-switch", deciders.YES, 4, iterations=5)
    assert json.loads(v.to_json()) == {
        "problem": "edge-switch", "answer": "yes", "budget_exhausted": False,
        "fixpoint": False, "iterations": 5, "witness_iteration": 4,
    }
    assert "witness_iteration" not in json.loads(deciders.Verdict("x", "no").to_json())


@pytest.mark.parametrize("B", [(0, 0), (1, 0)])
def test_edge_switch_on_built_game(B):
    F = set_bit(2, 1)
    gg = build(prepare(F), B, 1)
    v = deciders.edge_switch(gg.game, gg.sigma0, gg.watched, deciders.default_budget(gg))
    assert (v.answer == deciders.YES) == bitswitch_oracle(F, B, 1)
    if v.answer == deciders.YES:
        assert deciders.replay_witness(gg.game, gg.sigma0, gg.watched, v.witness_iteration)


def test_optimal_strategy_unknown_on_small_budget():
    gg = build_optstrat(prepare(increment(2)), (0, 0), 1)
    v = deciders.optimal_strategy_uses(gg.game, gg.sigma0, gg.watched, budget=3)
    assert v.answer == deciders.UNKNOWN


def test_relays_follow_third_clock():
    rep = deciders.check_relays(build_optstrat(prepare(increment(2)), (1, 0), 2))
    assert rep.ok and rep.optimal
    with pytest.raises(ValueError):
        deciders.check_relays(build(prepare(increment(2)), (1, 0), 2))


def test_trajectory_checker_catches_a_priority_swap():
    gg = build(prepare(increment(2)), (0, 1), 1)
    assert deciders.check_trajectory(gg).ok
    bad = deciders.mutate_swap(gg, ("a", 0, 3), ("a", 0, 4))
    rep = deciders.check_trajectory(bad)
    assert not rep.ok
    period = gg.params.length(0)
    assert rep.disagreements[0].t <= period
