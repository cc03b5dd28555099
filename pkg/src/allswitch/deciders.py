"""EdgeSwitch and OptimalStrategy by simulation, plus trajectory and invariant
checkers that replay a gadget game against the predicted strategy sequence.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from .construction import (
    OC,
    GadgetGame,
    Key,
    _F,
    _gate_output,
    availability,
    final_phase_end,
    horizon as schedule_horizon,
    key_name,
    kappa,
    materialize,
    pp,
    predict_full,
    schedule,
)
from .circuit import NOT
from .game import Appeal, ParityGame, _profile, evaluate, si_run

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass
class Verdict:
    problem: str
    answer: str
    witness_iteration: int | None = None
    budget_exhausted: bool = False
    fixpoint: bool = False
    iterations: int = 0

    def to_json(self) -> str:
        d = {
            "problem": self.problem,
            "answer": self.answer,
            "budget_exhausted": self.budget_exhausted,
            "fixpoint": self.fixpoint,
            "iterations": self.iterations,
        }
        if self.witness_iteration is not None:
            d["witness_iteration"] = self.witness_iteration
        return json.dumps(d, sort_keys=True)


def default_budget(gg: GadgetGame) -> int:
    """Iterations until copy 1 has finished computing F^(2^n)(B).

    Beyond this point the run leaves the predicted window, so a "no" found
    here is reported with ``budget_exhausted`` set.
    """
    return final_phase_end(gg.params)


def edge_switch(g: ParityGame, sigma0, e: tuple[int, int], budget: int | None = None) -> Verdict:
    """Is ``e = (v, u)`` ever switched by greedy all-switches from ``sigma0``?

    The witness is the index ``m`` of the strategy at which the edge is
    selected; the switch takes sigma_m to sigma_{m+1}.
    """
    v, u = e
    if u not in g.succ[v]:
        raise ValueError(f"{g.name(v)} -> {g.name(u)} is not an edge")
    hit: list[int] = []

    def hook(m, sigma, appeal):
        if appeal.selection.get(v) == u:
            hit.append(m)
            return True
        return False

    res = si_run(g, sigma0, budget, [hook], check_monotone=False)
    if hit:
        return Verdict("edge-switch", YES, hit[0], False, False, res.iterations)
    return Verdict("edge-switch", NO, None, res.budget_exhausted, res.optimal, res.iterations)


def replay_witness(g: ParityGame, sigma0, e: tuple[int, int], m: int) -> bool:
    """Re-run ``m`` iterations and confirm ``e`` is selected at sigma_m."""
    seen = []

    def hook(k, sigma, appeal):
        if k == m:
            seen.append(appeal.selection.get(e[0]) == e[1])
            return True
        return False

    si_run(g, sigma0, m, [hook], check_monotone=False)
    return bool(seen and seen[0])


def optimal_strategy_uses(
    g: ParityGame, sigma0, e: tuple[int, int], budget: int | None = None
) -> Verdict:
    """Does the final strategy of greedy all-switches use ``e``?"""
    res = si_run(g, sigma0, budget, check_monotone=False)
    if not res.optimal:
        return Verdict("optimal-strategy", UNKNOWN, None, True, False, res.iterations)
    v, u = e
    ans = YES if res.final[v] == u else NO
    return Verdict("optimal-strategy", ans, None, False, True, res.iterations)


# ---------------------------------------------------------------------------
# walking the predicted schedule


@dataclass
class Step:
    t: int
    bidx: int
    K: int
    j: int
    m: int
    B: tuple  # input of the computing copy
    sigma: dict
    appeal: Appeal
    prev_keys: list | None

    @property
    def coords(self) -> tuple:
        return (self.bidx, self.K, self.j, self.m)


def _inputs(gg: GadgetGame, count: int) -> list[tuple]:
    out = [tuple(gg.B)]
    for _ in range(count):
        out.append(_F(gg.circuit, out[-1]))
    return out


def walk(gg: GadgetGame, sigma0=None, horizon: int | None = None) -> list[Step]:
    """Run SI from ``sigma0`` and yield every strategy paired with its
    predicted coordinates, for the first ``horizon`` iterations."""
    P = gg.params
    H = schedule_horizon(P) if horizon is None else min(horizon, schedule_horizon(P))
    sched = list(schedule(P))[:H]
    Bs = _inputs(gg, sched[-1][1] + 1 if sched else 0)
    steps: list[Step] = []
    prev = [None]

    def hook(m, sigma, appeal):
        if m >= len(sched):
            return True
        t, bidx, K, j, mm = sched[m]
        steps.append(Step(t, bidx, K, j, mm, Bs[bidx], sigma, appeal, prev[0]))
        prev[0] = appeal.keys
        return False

    sigma0 = gg.sigma0 if sigma0 is None else sigma0
    si_run(gg.game, sigma0, max(H - 1, 0), [hook], check_monotone=False)
    return steps


# ---------------------------------------------------------------------------
# trajectory


@dataclass
class Disagreement:
    t: int
    coords: tuple  # (B-index, K, j, m)
    vertex: str
    expected: str
    actual: str
    side: str  # "even" or "odd"


@dataclass
class TrajectoryReport:
    iterations: int
    checked: int  # vertex comparisons made
    disagreements: list[Disagreement] = field(default_factory=list)
    ties: int = 0
    switched: list = field(default_factory=list)  # switch sets on predicted vertices

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.ties

    @property
    def first(self) -> Disagreement | None:
        return self.disagreements[0] if self.disagreements else None

    def to_json(self, limit: int = 20) -> str:
        return json.dumps(
            {
                "ok": self.ok,
                "iterations": self.iterations,
                "checked": self.checked,
                "disagreements": len(self.disagreements),
                "ties": self.ties,
                "first": [asdict(d) for d in self.disagreements[:limit]],
            },
            sort_keys=True,
        )


def _prediction(gg: GadgetGame, st: Step, Bs: list[tuple]):
    prev = Bs[st.bidx - 1] if st.bidx >= 1 else None
    return predict_full(gg, st.B, st.K, st.j, st.m, prev_stored=prev)


def check_trajectory(gg: GadgetGame, sigma0=None, horizon: int | None = None) -> TrajectoryReport:
    """Compare every visited strategy and best response with the prediction.

    Or-gates with two true inputs are predicted to follow whichever input was
    more appealing one iteration earlier.
    """
    g, ids = gg.game, gg.ids
    steps = list(walk(gg, sigma0, horizon))
    Bs = _inputs(gg, steps[-1].bidx + 1 if steps else 0)
    rep = TrajectoryReport(len(steps), 0)
    prev_dom: set | None = None
    last_switch: list = []
    for st in steps:
        pr = _prediction(gg, st, Bs)
        sigma, tau = st.sigma, st.appeal.tau
        rep.ties += len(st.appeal.ties)

        def bad(key, exp, act, side):
            rep.disagreements.append(
                Disagreement(st.t, st.coords, key_name(key), key_name(exp), g.name(act), side)
            )

        for key, exp in pr.even.items():
            rep.checked += 1
            if sigma[ids[key]] != ids[exp]:
                bad(key, exp, sigma[ids[key]], "even")
        for key, exp in pr.odd.items():
            rep.checked += 1
            if tau[ids[key]] != ids[exp]:
                bad(key, exp, tau[ids[key]], "odd")
        if st.prev_keys is not None:
            for key, (a, b) in pr.ornext.items():
                ka, kb = st.prev_keys[ids[a]], st.prev_keys[ids[b]]
                if ka == kb:
                    continue
                exp = a if ka > kb else b
                rep.checked += 1
                if sigma[ids[key]] != ids[exp]:
                    bad(key, exp, sigma[ids[key]], "even")
        dom = {ids[k] for k in pr.even} | {ids[k] for k in pr.ornext}
        if prev_dom is not None:
            both = prev_dom & dom
            rep.switched.append(sorted(sw for sw in last_switch if sw[0] in both))
        last_switch = list(st.appeal.selection.items())
        prev_dom = dom
    return rep


def mutate_swap(gg: GadgetGame, a: Key, b: Key) -> GadgetGame:
    """Copy of ``gg`` with the priorities of vertices ``a`` and ``b`` swapped."""
    g = gg.game
    pri = list(g.priority)
    va, vb = gg.ids[a], gg.ids[b]
    pri[va], pri[vb] = pri[vb], pri[va]
    g2 = ParityGame.from_lists(g.owner, pri, g.succ, g.names, g.sink)
    return replace(gg, game=g2)


# ---------------------------------------------------------------------------
# clock, best-response and gate-value invariants


@dataclass
class LemmaTally:
    checked: int = 0
    failed: int = 0
    first: dict | None = None

    def record(self, ok: bool, info: dict) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.first is None:
                self.first = info


@dataclass
class LemmaReport:
    iterations: int
    lemmas: dict  # name -> LemmaTally

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 and t.checked > 0 for t in self.lemmas.values())

    def to_json(self) -> str:
        return json.dumps(
            {
                "ok": self.ok,
                "iterations": self.iterations,
                "lemmas": {k: asdict(v) for k, v in self.lemmas.items()},
            },
            sort_keys=True,
        )


LEMMAS = ("clockrs", "crossclock", "nocycle", "oval")


class _Vals:
    """Simplified valuations of one (sigma, tau) profile, as rank masks."""

    def __init__(self, gg: GadgetGame, sigma, tau):
        g = gg.game
        self.g, self.ids = g, gg.ids
        self.top, self.mask, _ = evaluate(g, _profile(g, sigma, tau))

    def v(self, key) -> int:
        return self.ids[key]

    def terminating(self, *keys) -> bool:
        return all(self.top[self.v(k)] == self.g.sink for k in keys)

    def lt(self, a, b) -> bool:
        """val(a) strictly below val(b)."""
        g = self.g
        return g.set_key(self.mask[self.v(a)]) < g.set_key(self.mask[self.v(b)])

    def maxdiff(self, a, b) -> int:
        x = self.mask[self.v(a)] ^ self.mask[self.v(b)]
        return self.g.priority_by_rank[x.bit_length() - 1] if x else -1


def check_invariants(gg: GadgetGame, sigma0=None, horizon: int | None = None) -> LemmaReport:
    """Evaluate the clock, best-response and gate-value lemmas at every
    visited strategy of the predicted window.

    Gate-value timing follows :func:`availability`: a true or-gate fed by
    stored inputs becomes appealing before its depth alone would suggest.
    """
    P, C, g = gg.params, gg.circuit, gg.game
    V = len(g)
    floor7 = pp(7, 0, 0, 0, 0, V)
    floor6 = pp(6, 0, 0, 0, 0, V)
    tallies = {name: LemmaTally() for name in LEMMAS}
    steps = walk(gg, sigma0, horizon)
    not_gates = [i for i in range(C.n + 1, C.size + 1) if C.gate(i).kind == NOT]
    for st in steps:
        K, j, m = st.K, st.j, st.m
        o = 1 - j
        Ko = OC(K, j)
        Mo = m + P.delay(o, Ko) - 1
        vals = _Vals(gg, st.sigma, st.appeal.tau)
        where = {"t": st.t, "coords": list(st.coords)}

        # s versus r within one clock; they cross at the reset step
        T = tallies["clockrs"]
        for c, Kc, mc in ((j, K, m), (o, Ko, Mo)):
            s, r = ("s", c), ("r", c)
            ok = vals.terminating(s, r) and vals.maxdiff(s, r) >= floor7
            if mc == P.length(Kc):
                ok = ok and vals.lt(r, s)
            else:
                ok = ok and vals.lt(s, r)
            T.record(ok, {**where, "clock": c})

        # across the two clocks
        T = tallies["crossclock"]
        s, r, s_, r_ = ("s", j), ("r", j), ("s", o), ("r", o)
        ok = vals.terminating(s, r, s_, r_) and vals.maxdiff(r_, s) >= floor7
        if m == P.delay(j, K) - 1:
            ok = ok and vals.lt(r_, r) and vals.lt(r, s_) and vals.maxdiff(r_, r) >= floor7
        else:
            ok = ok and vals.lt(r_, s) and vals.lt(s, r)
        T.record(ok, where)

        # Odd never closes the even d/e cycle
        T = tallies["nocycle"]
        pairs = [(("nd", c, i), ("ne", c, i)) for c in (0, 1) for i in not_gates]
        pairs += [(("id", c, i), ("ie", c, i)) for c in (0, 1) for i in range(1, C.n + 1)]
        for d, e in pairs:
            vd, ve = gg.ids[d], gg.ids[e]
            if st.sigma[vd] == ve:
                T.record(st.appeal.tau[ve] != vd, {**where, "vertex": key_name(e)})

        # gate outputs against r^j
        if m < 3:
            continue
        T = tallies["oval"]
        val = C.values(st.B)
        A = availability(C, st.B)
        for i in range(1, C.size + 1):
            out = _gate_output(C, j, i)
            ready = bool(val[i]) and m >= A[i]
            if not vals.terminating(out, r):
                T.record(False, {**where, "gate": i, "reason": "non-terminating"})
                continue
            if ready:
                md = vals.maxdiff(r, out)
                ok = vals.lt(r, out) and floor6 <= md <= pp(6, i, 1, j, 0, V)
            else:
                ok = vals.lt(out, r)
            T.record(ok, {**where, "gate": i, "ready": ready})
    return LemmaReport(len(steps), tallies)


check_appendix_lemmas = check_invariants


@dataclass
class RelayReport:
    flip: int | None  # first strategy with the third clock's top bit set
    settled: int | None  # first strategy with every relay on the top f-vertex
    stays: bool  # no relay leaves it afterwards
    optimal: bool

    @property
    def ok(self) -> bool:
        return (
            self.flip is not None
            and self.settled is not None
            and self.settled <= self.flip + 1
            and self.stays
        )


def check_relays(gg: GadgetGame, budget: int | None = None) -> RelayReport:
    """Relay invariant of the optimal-strategy variant: once the third
    clock's top bit is set, every relay ``v_u`` moves to that bit's f-vertex
    within one iteration and stays there."""
    if not gg.optstrat:
        raise ValueError("relays exist only in games from build_optstrat")
    g, top = gg.game, gg.params.n + 1
    gv, fv = gg.id("g", 2, top), gg.id("f", 2, top)
    relays = [v for v in g.vertices if gg.keys[v][0] == "v"]
    rep = RelayReport(None, None, True, False)

    def hook(m, sigma, appeal):
        if rep.flip is None and sigma[gv] == fv:
            rep.flip = m
        on = all(sigma[v] == fv for v in relays)
        if rep.settled is None:
            if on:
                rep.settled = m
        elif not on:
            rep.stays = False

    rep.optimal = si_run(g, gg.sigma0, budget, [hook], check_monotone=False).optimal
    return rep


@dataclass
class ClockReport:
    start: int
    steps: dict  # K -> iterations spent at K
    disagreements: list[Disagreement]
    ties: int
    reached: int | None  # value whose first step was reached last

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.ties


def check_clock(gg: GadgetGame, K0: int = 0, stop: int | None = None) -> ClockReport:
    """Run a standalone clock from kappa^K0_1 and compare every strategy with
    kappa^K_1 .. kappa^K_length(K), kappa^(K+1)_1, ... up to value ``stop``
    (default: all ones)."""
    P, g, ids = gg.params, gg.game, gg.ids
    top = 2**P.n - 1 if stop is None else stop
    expected: list[tuple[int, int]] = []
    for K in range(K0, top):
        expected += [(K, m) for m in range(1, P.length(K) + 1)]
    expected.append((top, 1))
    rep = ClockReport(K0, {}, [], 0, None)
    sigma0 = materialize(gg, kappa(gg, 0, K0, 1))

    def hook(t, sigma, appeal):
        if t >= len(expected):
            return True
        K, m = expected[t]
        rep.ties += len(appeal.ties)
        for key, exp in kappa(gg, 0, K, m).items():
            if sigma[ids[key]] != ids[exp]:
                rep.disagreements.append(
                    Disagreement(t, (K, m), key_name(key), key_name(exp), g.name(sigma[ids[key]]), "even")
                )
        if m == 1:
            rep.reached = K
        rep.steps[K] = rep.steps.get(K, 0) + 1
        return False

    si_run(g, sigma0, len(expected) - 1, [hook], check_monotone=False)
    return rep
