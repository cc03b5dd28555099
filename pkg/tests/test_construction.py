import itertools
import json

import pytest

from allswitch.circuit import NOT, OR, Circuit, Or, increment, identity, prepare, set_bit
from allswitch.construction import (
    BuildError,
    Params,
    availability,
    build,
    build_binary_or_gate,
    build_clock,
    build_optstrat,
    final_phase_end,
    horizon,
    kappa,
    lsz,
    materialize,
    nexbit,
    pp,
    predict,
    random_start,
    schedule,
)
from allswitch.game import evaluate, si_run, _profile


@pytest.fixture(scope="module")
def inc():
    return build(prepare(increment(2)), (0, 1), 1)


def test_pp_values():
    assert pp(0, 0, 0, 0, 1, 10) == 1
    assert pp(0, 0, 0, 0, 1, 5000) == 1
    assert pp(0, 0, 0, 0, 0, 10) == 0
    assert pp(2, 0, 5, 1, 1, 10) == 1233


def test_counter_helpers():
    K = 0b101  # bits (1, 0, 1), bit 1 least significant
    assert lsz(K, 3) == 2
    assert nexbit(K, 1, 3) == 3
    assert lsz(0b111, 3) is None
    assert Params(2, 2, 0).length(0b01) == 14 + 4 + 5


def test_delays_add_up_to_length_plus_two():
    P = Params(2, 19, 7)
    for K in range(3):
        assert P.delay(0, K) + P.delay(1, K) == P.length(K) + 2


def test_no_priority_zero_and_all_distinct(inc):
    g = inc.game
    assert 0 not in g.priority
    assert g.is_strict


def test_sink_row(inc):
    x = inc.id("x")
    assert inc.game.succ[x] == (x,)
    assert inc.game.priority[x] == 1


def test_clock_bit_edges(inc):
    P = inc.params
    for j in (0, 1):
        for i in range(1, P.n + 1):
            succ = {inc.keys[u] for u in inc.game.succ[inc.id("d", j, i)]}
            lane = {("a", j, l) for l in range(1, P.base + 2 * i + 1)}
            assert succ == {("e", j, i), ("s", j), ("r", j)} | lane


def _row_count(C: Circuit, P: Params) -> int:
    """Vertex count summed over the gadget tables."""
    clock = lambda bits: (P.clock_lane(bits) + 1) + P.clock_lane(bits) + 6 * bits + 2
    L = P.lane
    gates = [C.gate(i).kind for i in range(C.n + 1, C.size + 1)]
    per_copy = gates.count(OR) + gates.count(NOT) * (2 * L + 5) + C.n * (2 * L + 11) + 2
    return 1 + 2 * clock(P.n) + 2 * per_copy


@pytest.mark.parametrize("F", [identity(2), set_bit(2, 2), increment(2)])
def test_vertex_count_matches_tables(F):
    gg = build(prepare(F), (0, 0), 1)
    assert len(gg.game) == _row_count(gg.circuit, gg.params)


def test_optimal_strategy_variant_edges():
    C = prepare(identity(2))
    go = build_optstrat(C, (1, 0), 2)
    n = C.n
    top = go.id("e", 2, n + 1)
    assert [go.keys[u] for u in go.game.succ[top]] == [("d", 2, n + 1)]
    f = go.id("f", 2, n + 1)
    relays = [v for v in go.game.vertices if go.keys[v][0] == "v"]
    assert relays
    for v in relays:
        u = go.ids[go.keys[v][1]]
        assert set(go.game.succ[v]) == {u, f}
    d = go.id("id", 1, 2)
    assert set(go.game.succ[d]) == set(relays)


def test_binary_or_gadget():
    g, ids = build_binary_or_gate(3, 0)
    o2 = ids[("o2", 0, 3)]
    assert set(g.succ[o2]) == {ids[("stub", "in1")], ids[("stub", "in2")]}
    for key in (("o", 0, 3), ("o1", 0, 3), ("o2", 0, 3)):
        assert len(g.succ[ids[key]]) == 2
    for stubs in (None, {"in1": 8, "in2": 10}, {"in1": 3, "in2": 5}):
        g, ids = build_binary_or_gate(3, 0, stubs)
        for sc in itertools.product(*(g.succ[v] for v in g.even_vertices)):
            assert si_run(g, dict(zip(g.even_vertices, sc))).iterations <= 2


def test_first_step_sends_lanes_to_s(inc):
    P = inc.params
    for j in (0, 1):
        pr = predict(inc, (0, 1), 1, j, 1)
        for l in range(1, P.clock_lane(P.n) + 1):
            assert pr[("t", j, l)] == ("s", j)


def test_set_bit_keeps_d_on_e(inc):
    P = inc.params
    for m in range(1, P.delay(0, 1)):
        assert predict(inc, (0, 1), 1, 0, m)[("d", 0, 1)] == ("e", 0, 1)


def test_not_gate_with_false_input_goes_to_e():
    C = prepare(identity(2))
    gg = build(C, (1, 0), 1)
    P, B = gg.params, (1, 0)
    val = C.values(B)
    seen = 0
    for i in range(C.n + 1, C.size + 1):
        g = C.gate(i)
        if g.kind != NOT or val[g.in1]:
            continue
        for m in range(C.depth[i] + 3, P.delay(0, 1)):
            assert predict(gg, B, 1, 0, m)[("nd", 0, i)] == ("ne", 0, i)
            seen += 1
    assert seen


def test_availability_of_stored_inputs():
    C = prepare(identity(2))
    A = availability(C, (1, 0))
    assert A[1] == 2 and A[2] is None


def test_constructed_game_is_one_sink(inc):
    res = si_run(inc.game, inc.sigma0, check_monotone=False)
    assert res.optimal
    top, _, _ = evaluate(inc.game, _profile(inc.game, res.final, res.final_tau))
    assert set(top) == {inc.id("x")}


def test_schedule_covers_two_computations(inc):
    steps = list(schedule(inc.params))
    assert len(steps) == horizon(inc.params)
    assert len({s[1] for s in steps}) >= 4  # 2^n computations for n = 2
    assert final_phase_end(inc.params) <= horizon(inc.params)


def test_one_bit_circuits_have_no_window():
    with pytest.raises(BuildError):
        final_phase_end(build(prepare(identity(1)), (0,), 1).params)


def test_random_start_only_changes_free_vertices(inc):
    for seed in range(3):
        s = random_start(inc, seed)
        for key, target in inc.chi0.items():
            assert s[inc.ids[key]] == inc.ids[target]
    assert materialize(inc, inc.chi0) == inc.sigma0


def test_clock_start_strategy():
    gg = build_clock(3, K=5)
    chi = kappa(gg, 0, 5, 1)
    assert chi[("d", 0, 1)] == ("e", 0, 1) and chi[("d", 0, 3)] == ("e", 0, 3)
    assert chi[("d", 0, 2)] == ("s", 0)


def test_manifest(inc):
    m = json.loads(inc.manifest_json())
    assert m["vertices"] == len(inc.game)
    assert m["watched"] == ["id_1_1", "ie_1_1"]
    assert m["repairs"]
    assert {k["name"] for k in m["keys"]} == set(inc.game.names)


def test_input_checks():
    with pytest.raises(BuildError):
        build(prepare(identity(2)), (0, 1, 1), 1)
    with pytest.raises(BuildError):
        build(prepare(identity(2)), (0, 1), 3)
    with pytest.raises(BuildError):
        build(Circuit(1, (Or(1, 1),)), (0,), 1)  # outputs must be not-gates
