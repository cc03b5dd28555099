"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line, shown in
the terminal summary, and then asserts it.  Corpora use fixed seeds."""

import itertools
import random

from acceptance_log import record
from conftest import CIRCUITS, INPUTS

from allswitch import auso, circuit as circ, construction as cons, deciders, reductions
from allswitch.game import (
    ParityGame,
    brute_force_winning,
    is_one_sink,
    optimal_valuations_bruteforce,
    random_game,
    random_one_sink_game,
    si_run,
    solve,
)

# ---------------------------------------------------------------------------
# shared corpora


def general_corpus():
    """1,000 random strict games on 1..7 vertices."""
    rng = random.Random(1)
    return [random_game(rng, rng.randint(1, 7), rng.choice([2, 3])) for _ in range(1000)]


def one_sink_corpus():
    """200 random one-sink games on 2..8 vertices, each with a random start."""
    rng = random.Random(7)
    out = []
    for _ in range(200):
        g = random_one_sink_game(rng, rng.randint(2, 8), rng.choice([2, 3]))
        out.append((g, {v: rng.choice(g.succ[v]) for v in g.even_vertices}))
    return out


def binary_corpus():
    """100 random binary one-sink games with 1..8 choice vertices."""
    rng = random.Random(11)
    out = []
    while len(out) < 100:
        g = random_one_sink_game(rng, rng.randint(3, 14), 2)
        c, bg = auso.to_cube(g)
        if 1 <= c.d <= 8:
            out.append((g, c, bg))
    return out


def order_parity_priorities(k: int, top: int = 9):
    """One priority assignment in 2..top per order-and-parity class of k
    distinct priorities: the smallest values for each sorted parity pattern,
    under every permutation."""
    out = set()
    for pattern in itertools.product((0, 1), repeat=k):
        vals, cur = [], 1
        for par in pattern:
            cur += 1
            if cur % 2 != par:
                cur += 1
            vals.append(cur)
        if vals and vals[-1] > top:
            continue
        out.update(itertools.permutations(vals))
    return sorted(out)


def small_one_sink_candidates(n: int, priorities):
    """Games with sink 0 and n-1 further vertices of out-degree 1 or 2."""
    choices = [(u,) for u in range(n)] + list(itertools.combinations(range(n), 2))
    for pri in priorities:
        for owner in itertools.product((0, 1), repeat=n - 1):
            for succ in itertools.product(choices, repeat=n - 1):
                yield ParityGame.from_lists((0, *owner), (1, *pri), [(0,), *succ], sink=0)


def _semantic_one_sink(g: ParityGame) -> bool:
    best, _ = optimal_valuations_bruteforce(g)
    return all(v.p == 1 for v in best)


# ---------------------------------------------------------------------------


def test_criterion_1_solver_soundness():
    games = ones = bad = 0
    for n in range(1, 5):
        for g in small_one_sink_candidates(n, order_parity_priorities(n - 1)):
            games += 1
            if not _semantic_one_sink(g):
                continue
            ones += 1
            bad += solve(g) != brute_force_winning(g)
    # literal priorities, to back the order-and-parity quotient
    rng = random.Random(5)
    choices = [(u,) for u in range(4)] + list(itertools.combinations(range(4), 2))
    sampled = 0
    while sampled < 3000:
        pri = rng.sample(range(2, 10), 3)
        g = ParityGame.from_lists(
            (0, *(rng.randrange(2) for _ in range(3))), (1, *pri),
            [(0,), *(rng.choice(choices) for _ in range(3))], sink=0,
        )
        if not _semantic_one_sink(g):
            continue
        sampled += 1
        bad += solve(g) != brute_force_winning(g)
    rand_bad = sum(solve(g) != brute_force_winning(g) for g in general_corpus())
    ok = bad == 0 and rand_bad == 0
    record(
        1, "solver soundness", ok,
        f"(a) {ones} one-sink games of {games} enumerated classes plus {sampled} literal samples, "
        f"{bad} mismatches; (b) 1000 random games, {rand_bad} mismatches",
    )
    assert ok


def test_criterion_2_monotone_improvement():
    tally = {"general": [0, 0, 0], "one-sink": [0, 0, 0], "constructed": [0, 0, 0]}

    def add(kind, res):
        t = tally[kind]
        t[0] += res.iterations
        t[1] += res.decreases
        t[2] += res.nonstrict

    for g in general_corpus():
        add("general", si_run(g, g.default_strategy()))
    for g, s0 in one_sink_corpus():
        add("one-sink", si_run(g, s0))
    for name, F in CIRCUITS.items():
        C = circ.prepare(F)
        for B in INPUTS:
            for gg in (cons.build(C, B, 1), cons.build_optstrat(C, B, 1)):
                add("constructed", si_run(gg.game, gg.sigma0))
    clock = cons.build_clock(3)
    add("constructed", si_run(clock.game, clock.sigma0))
    ok = all(t[1] == 0 and t[2] == 0 for t in tally.values())
    detail = "; ".join(f"{k}: {t[0]} iterations, {t[1]} decreases, {t[2]} without strict gain" for k, t in tally.items())
    record(2, "monotone improvement", ok, detail)
    assert ok


def test_criterion_3_clock_fidelity():
    gg = cons.build_clock(3)
    P = gg.params
    full = deciders.check_clock(gg)
    problems = len(full.disagreements) + full.ties
    lengths_ok = all(full.steps[K] == P.length(K) for K in range(7))
    reached_ok = full.reached == 7
    for K in range(7):
        rep = deciders.check_clock(cons.build_clock(3, K=K), K0=K, stop=K + 1)
        problems += len(rep.disagreements) + rep.ties
        lengths_ok &= rep.steps.get(K) == P.length(K) and rep.reached == K + 1
    ok = problems == 0 and lengths_ok and reached_ok
    record(
        3, "clock fidelity", ok,
        f"n=3 from 0 reaches {full.reached}, steps per K {dict(sorted(full.steps.items()))}, "
        f"{problems} disagreements or ties over the full count and 7 single-step starts",
    )
    assert ok


def test_criterion_4_trajectory_fidelity(constructed):
    total = ties = checked = 0
    phases = []
    for gg in constructed.values():
        rep = deciders.check_trajectory(gg)
        total += len(rep.disagreements)
        ties += rep.ties
        checked += rep.checked
        phases.append(len({bidx for _, bidx, *_ in cons.schedule(gg.params)}))
    ok = total == 0 and ties == 0 and min(phases) >= 2
    record(
        4, "trajectory fidelity", ok,
        f"{len(constructed)} instances, {checked} strategy and best-response comparisons, "
        f"{total} disagreements, {ties} ties, at least {min(phases)} computations each",
    )
    assert ok


def test_criterion_5_decision_correctness():
    instances = [(F, B, z) for F in CIRCUITS.values() for B in INPUTS for z in (1, 2)]
    rng = random.Random(2024)
    for _ in range(10):
        F = circ.random_circuit(rng, 2, rng.randint(2, 5))
        instances += [(F, B, z) for B in INPUTS for z in (1, 2)]
    bad = 0
    seen = {"edge": set(), "opt": set()}
    for F, B, z in instances:
        C = circ.prepare(F)
        gb = cons.build(C, B, z)
        e = deciders.edge_switch(gb.game, gb.sigma0, gb.watched, deciders.default_budget(gb))
        go = cons.build_optstrat(C, B, z)
        o = deciders.optimal_strategy_uses(go.game, go.sigma0, go.watched)
        seen["edge"].add(e.answer)
        seen["opt"].add(o.answer)
        bad += (e.answer == deciders.YES) != circ.bitswitch_oracle(F, B, z)
        bad += (o.answer == deciders.YES) != circ.circuitvalue_oracle(F, B, z)
    both = all(s == {deciders.YES, deciders.NO} for s in seen.values())
    ok = bad == 0 and both
    record(
        5, "decision correctness", ok,
        f"{len(instances)} instances x 2 problems, {bad} oracle mismatches, "
        f"answers seen: edge-switch {sorted(seen['edge'])}, optimal-strategy {sorted(seen['opt'])}",
    )
    assert ok


def test_criterion_6_invariants(constructed):
    totals = {name: [0, 0] for name in deciders.LEMMAS}
    first = {}
    for key, gg in constructed.items():
        rep = deciders.check_invariants(gg)
        for name, t in rep.lemmas.items():
            totals[name][0] += t.checked
            totals[name][1] += t.failed
            if t.first and name not in first:
                first[name] = (key, t.first)
    ok = all(c > 0 and f == 0 for c, f in totals.values())
    detail = ", ".join(f"{k} {f}/{c} failed" for k, (c, f) in totals.items())
    if first:
        detail += "; first failures: " + "; ".join(f"{k} at {v[0]} {v[1]}" for k, v in first.items())
    record(6, "invariant suite", ok, detail)
    assert ok


def test_criterion_7_gain_bias_equivalence(constructed):
    diverged = violations = checked = 0
    runs = 0
    for g, s0 in one_sink_corpus():
        a = si_run(g, s0, check_monotone=False)
        b = reductions.gain_bias_si_run(reductions.to_mean_payoff(g), s0, check_argmax=True)
        diverged += not reductions.switch_sequence_equal(a.trace, b.trace)[0]
        violations += b.argmax_violations
        checked += b.argmax_checked
        runs += 1
    for gg in constructed.values():
        a = si_run(gg.game, gg.sigma0, check_monotone=False)
        b = reductions.gain_bias_si_run(reductions.to_mean_payoff(gg.game), gg.sigma0, check_argmax=True)
        diverged += not (a.optimal and b.optimal and reductions.switch_sequence_equal(a.trace, b.trace)[0])
        violations += b.argmax_violations
        checked += b.argmax_checked
        runs += 1
    ok = diverged == 0 and violations == 0 and checked > 0
    record(
        7, "gain-bias equivalence", ok,
        f"{runs} runs (200 random, {len(constructed)} constructed), {diverged} diverging switch sequences, "
        f"{violations} argmax violations in {checked} checks",
    )
    assert ok


def test_criterion_8_auso_correspondence():
    not_uso, cyclic, mismatches, starts = [], 0, 0, 0
    for idx, (g, c, bg) in enumerate(binary_corpus()):
        u = auso.validate_uso(c)
        if not u.ok:
            not_uso.append((idx, u.reason, is_one_sink(g).semantic))
        cyclic += not auso.validate_acyclic(c).ok
        for x in range(1 << c.d):
            starts += 1
            mismatches += not auso.si_correspondence(c, bg, x).ok
    ok = not not_uso and cyclic == 0 and mismatches == 0
    detail = (
        f"100 games, {len(not_uso)} not USO {not_uso}, {cyclic} cyclic, "
        f"{mismatches} BottomAntipodal/SI mismatches over {starts} starts"
    )
    record(8, "AUSO correspondence", ok, detail)
    assert ok


def test_criterion_9_unspecified_fill_robustness(constructed):
    bad_traj = bad_verdict = bad_switch = 0
    for gg in constructed.values():
        base = deciders.check_trajectory(gg)
        ref = deciders.edge_switch(gg.game, gg.sigma0, gg.watched, deciders.default_budget(gg))
        for seed in range(5):
            s0 = cons.random_start(gg, seed)
            rep = deciders.check_trajectory(gg, s0)
            bad_traj += not rep.ok
            bad_switch += rep.switched != base.switched
            v = deciders.edge_switch(gg.game, s0, gg.watched, deciders.default_budget(gg))
            bad_verdict += (v.answer, v.witness_iteration) != (ref.answer, ref.witness_iteration)
    ok = bad_traj == bad_verdict == bad_switch == 0
    record(
        9, "robustness to unspecified choices", ok,
        f"{len(constructed)} instances x 5 seeds: {bad_traj} trajectory failures, "
        f"{bad_verdict} verdict changes, {bad_switch} switched-set changes on predicted vertices",
    )
    assert ok
