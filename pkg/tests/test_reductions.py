import random
from fractions import Fraction

import pytest

from allswitch.game import ParityGame, Trace, random_one_sink_game, si_run
from allswitch.reductions import (
    SparseInt,
    cmp_value,
    gain_bias,
    gain_bias_si_run,
    switch_sequence_equal,
    to_mean_payoff,
)


def test_sparse_int_matches_int():
    rng = random.Random(3)
    for _ in range(500):
        base = rng.choice([2, 3, 10, 97])
        a, b = rng.randint(-10**9, 10**9), rng.randint(-10**9, 10**9)
        x, y = SparseInt.from_int(base, a), SparseInt.from_int(base, b)
        assert int(x + y) == a + b
        assert int(x - y) == a - b
        assert int(x.scale(7)) == 7 * a
        assert (x < y) == (a < b)
        assert (x - y).sign() == (a > b) - (a < b)


def test_sparse_int_huge_powers():
    base = 10
    big = SparseInt.power(base, 10**6) - SparseInt.power(base, 10**6 - 1, 9)
    assert big == SparseInt.power(base, 10**6 - 1)
    assert big.sign() == 1
    with pytest.raises(ValueError):
        SparseInt.from_int(2, 1) + SparseInt.from_int(3, 1)


def three_vertex_game():
    # sink 0, vertex 1 of priority 1, vertex 2 of priority 2
    return ParityGame.from_lists((0, 0, 0), (5, 1, 2), [(0,), (0,), (0, 1)], sink=0)


def test_weights():
    mpg = to_mean_payoff(three_vertex_game())
    assert mpg.m == 3
    assert mpg.weight_int(0) == 0 and int(mpg.weight(0)) == 0
    assert mpg.weight_int(1) == -3 and int(mpg.weight(1)) == -3
    assert mpg.weight_int(2) == 9 and int(mpg.weight(2)) == 9
    assert "(-3)^2" in mpg.to_text(max_digits=0)


def test_gain_and_bias_on_a_path():
    mpg = to_mean_payoff(three_vertex_game())
    gb = gain_bias(mpg, {0: 0, 1: 0, 2: 1})
    assert [gb.gain(v) for v in range(3)] == [0, 0, 0]
    assert gb.bias(1) == Fraction(-3) and gb.bias(2) == Fraction(6)
    assert cmp_value(gb.values[2], gb.values[1]) > 0


def test_gain_bias_run_matches_parity_run():
    rng = random.Random(8)
    for _ in range(30):
        g = random_one_sink_game(rng, rng.randint(2, 7), 3)
        s0 = {v: rng.choice(g.succ[v]) for v in g.even_vertices}
        a = si_run(g, s0, check_monotone=False)
        b = gain_bias_si_run(to_mean_payoff(g), s0, check_argmax=True)
        assert switch_sequence_equal(a.trace, b.trace)[0]
        assert b.optimal and b.argmax_violations == 0


def test_switch_sequence_equal():
    g = three_vertex_game()
    a = si_run(g, {0: 0, 1: 0, 2: 0}).trace
    assert switch_sequence_equal(a, a) == (True, None)
    empty = Trace({0: 0, 1: 0, 2: 1})
    same, div = switch_sequence_equal(a, empty)
    assert not same and div.iteration == 0 and div.b is None
