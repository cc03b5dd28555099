"""Parity games and the Vöge–Jurdziński strategy improvement algorithm.

Strategies are plain ``dict`` objects mapping an owned vertex to its chosen
successor.  Valuations are exposed as :class:`VJValuation` triples, but the
engine works with integer sort keys that induce exactly the same order:

* priority ``p`` maps to ``p`` if even and ``-p`` if odd;
* a priority set ``S`` maps to ``sum(+-2**rank(q) for q in S)`` where the sign
  is ``+`` for even and ``-`` for odd priorities, and ``rank`` is the position
  of ``q`` in the sorted priority list of the game;
* the path length ``d`` maps to ``d`` if ``p`` is odd and ``-d`` otherwise.

Comparing the resulting tuples lexicographically reproduces the valuation
order, so the hot loops only ever compare Python ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

EVEN, ODD = 0, 1

Strategy = dict  # vertex -> successor
Key = tuple  # (priority key, set key, length key)


class GameError(ValueError):
    """Malformed game or strategy."""


class NotStrictError(GameError):
    """A VJ operation was applied to a game with duplicate priorities."""


class NonTerminatingError(GameError):
    """The simplified valuation was requested for a non-terminating strategy."""


# ---------------------------------------------------------------------------
# game model


@dataclass(frozen=True)
class ParityGame:
    owner: tuple[int, ...]
    priority: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None
    sink: int | None = None

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n or len(self.succ) != n:
            raise GameError("owner, priority and succ must have equal length")
        if self.names is not None and len(self.names) != n:
            raise GameError("names must cover every vertex")
        for v in range(n):
            if self.owner[v] not in (EVEN, ODD):
                raise GameError(f"vertex {v}: owner must be 0 or 1")
            if self.priority[v] < 0:
                raise GameError(f"vertex {v}: negative priority")
            if not self.succ[v]:
                raise GameError(f"vertex {v}: no successors")
            for u in self.succ[v]:
                if not 0 <= u < n:
                    raise GameError(f"vertex {v}: successor {u} out of range")
            if len(set(self.succ[v])) != len(self.succ[v]):
                raise GameError(f"vertex {v}: repeated successor")
        if self.sink is not None and not 0 <= self.sink < n:
            raise GameError("sink out of range")

    @classmethod
    def from_lists(cls, owner, priority, succ, names=None, sink=None) -> "ParityGame":
        return cls(
            tuple(owner),
            tuple(priority),
            tuple(tuple(s) for s in succ),
            tuple(names) if names is not None else None,
            sink,
        )

    def to_dict(self) -> dict:
        d = {"owner": list(self.owner), "priority": list(self.priority), "succ": [list(s) for s in self.succ]}
        if self.names is not None:
            d["names"] = list(self.names)
        if self.sink is not None:
            d["sink"] = self.sink
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "ParityGame":
        try:
            return cls.from_lists(d["owner"], d["priority"], d["succ"], d.get("names"), d.get("sink"))
        except (KeyError, TypeError) as exc:
            raise GameError(f"game JSON needs 'owner', 'priority' and 'succ': {exc}") from None

    def __len__(self) -> int:
        return len(self.owner)

    @property
    def vertices(self) -> range:
        return range(len(self.owner))

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    @cached_property
    def is_strict(self) -> bool:
        return len(set(self.priority)) == len(self.priority)

    @cached_property
    def even_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.owner[v] == EVEN)

    @cached_property
    def odd_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.owner[v] == ODD)

    @cached_property
    def rank_bit(self) -> tuple[int, ...]:
        """``1 << rank`` of each vertex's priority among all priorities."""
        self.require_strict()
        order = sorted(self.vertices, key=lambda v: self.priority[v])
        bit = [0] * len(self)
        for rank, v in enumerate(order):
            bit[v] = 1 << rank
        return tuple(bit)

    @cached_property
    def parity_masks(self) -> tuple[int, int]:
        even = odd = 0
        for v in self.vertices:
            if self.priority[v] % 2:
                odd |= self.rank_bit[v]
            else:
                even |= self.rank_bit[v]
        return even, odd

    @cached_property
    def priority_by_rank(self) -> tuple[int, ...]:
        return tuple(sorted(self.priority))

    def mask_priorities(self, mask: int) -> frozenset:
        pr = self.priority_by_rank
        out = []
        while mask:
            low = mask & -mask
            out.append(pr[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)

    def set_key(self, mask: int) -> int:
        even, odd = self.parity_masks
        return (mask & even) - (mask & odd)

    def require_strict(self) -> None:
        if not self.is_strict:
            raise NotStrictError("valuations need pairwise distinct priorities")

    def check_strategy(self, strategy: Mapping[int, int], side: int) -> None:
        for v in self.vertices:
            if self.owner[v] != side:
                continue
            if v not in strategy:
                raise GameError(f"strategy undefined at vertex {self.name(v)}")
            if strategy[v] not in self.succ[v]:
                raise GameError(
                    f"strategy picks non-edge {self.name(v)} -> {strategy[v]}"
                )

    def default_strategy(self, side: int = EVEN) -> Strategy:
        return {v: min(self.succ[v]) for v in self.vertices if self.owner[v] == side}


# ---------------------------------------------------------------------------
# orders on priorities, priority sets and valuations

def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def priority_key(p: int) -> int:
    return p if p % 2 == 0 else -p


def cmp_priority(p: int, q: int) -> int:
    """-1 if p ≺ q, 0 if equal, 1 if q ≺ p."""
    return _sign(priority_key(p) - priority_key(q))


def maxdiff(P: Iterable[int], Q: Iterable[int]) -> int:
    diff = set(P) ^ set(Q)
    if not diff:
        raise ValueError("maxdiff of equal sets is undefined")
    return max(diff)


def cmp_priority_set(P: Iterable[int], Q: Iterable[int]) -> int:
    P, Q = set(P), set(Q)
    if P == Q:
        return 0
    d = maxdiff(P, Q)
    if d % 2 == 0:
        return -1 if d in Q else 1
    return -1 if d in P else 1


@dataclass(frozen=True)
class VJValuation:
    p: int
    S: frozenset
    d: int

    def __repr__(self):
        return f"({self.p}, {sorted(self.S, reverse=True)}, {self.d})"


def cmp_valuation(a: VJValuation, b: VJValuation) -> int:
    c = cmp_priority(a.p, b.p)
    if c:
        return c
    c = cmp_priority_set(a.S, b.S)
    if c:
        return c
    if a.d == b.d:
        return 0
    if a.p % 2 == 1:
        return -1 if a.d < b.d else 1
    return -1 if a.d > b.d else 1


# ---------------------------------------------------------------------------
# plays and valuations


@dataclass(frozen=True)
class Play:
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]


def _profile(g: ParityGame, sigma: Mapping[int, int], tau: Mapping[int, int]) -> list[int]:
    return [sigma[v] if g.owner[v] == EVEN else tau[v] for v in g.vertices]


def play(g: ParityGame, v0: int, sigma: Mapping[int, int], tau: Mapping[int, int]) -> Play:
    """The lasso from v0; the prefix runs up to and including the vertex
    carrying the largest priority of the cycle, and the cycle starts there."""
    seen: dict[int, int] = {}
    walk = []
    v = v0
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = sigma[v] if g.owner[v] == EVEN else tau[v]
    loop = walk[seen[v]:]
    top = max(loop, key=lambda u: g.priority[u])
    i = loop.index(top)
    return Play(tuple(walk[: seen[top] + 1]), tuple(loop[i:] + loop[:i]))


def vj_valuation(g: ParityGame, sigma, tau, v: int) -> VJValuation:
    g.require_strict()
    pl = play(g, v, sigma, tau)
    p = g.priority[pl.cycle[0]]
    S = frozenset(g.priority[u] for u in pl.prefix if g.priority[u] > p)
    return VJValuation(p, S, len(pl.prefix))


def evaluate(g: ParityGame, nxt: Sequence[int]):
    """Valuations of every vertex in the one-successor graph ``nxt``.

    Returns per-vertex lists ``(top, mask, d)``: the vertex carrying the
    dominating cycle priority, the rank bitmask of ``S`` and the path length.
    """
    pri = g.priority
    bit = g.rank_bit
    N = len(nxt)
    state = bytearray(N)  # 0 new, 1 on stack, 2 done
    top = [0] * N
    mask = [0] * N
    dist = [0] * N
    for start in range(N):
        if state[start]:
            continue
        path = []
        v = start
        while not state[v]:
            state[v] = 1
            path.append(v)
            v = nxt[v]
        if state[v] == 1:
            i = path.index(v)
            cyc = path[i:]
            del path[i:]
            u = max(cyc, key=pri.__getitem__)
            L = len(cyc)
            j = cyc.index(u)
            for t, c in enumerate(cyc):
                top[c] = u
                dist[c] = (j - t) % L + 1
                state[c] = 2
        for c in reversed(path):
            n_ = nxt[c]
            u = top[n_]
            top[c] = u
            mask[c] = mask[n_] | bit[c] if pri[c] > pri[u] else mask[n_]
            dist[c] = dist[n_] + 1
            state[c] = 2
    return top, mask, dist


def keys_of(g: ParityGame, nxt: Sequence[int]) -> list[Key]:
    top, mask, dist = evaluate(g, nxt)
    pri = g.priority
    even, odd = g.parity_masks
    out = []
    for v in range(len(nxt)):
        p = pri[top[v]]
        m = mask[v]
        if p % 2:
            out.append((-p, (m & even) - (m & odd), dist[v]))
        else:
            out.append((p, (m & even) - (m & odd), -dist[v]))
    return out


def valuations_of(g: ParityGame, nxt: Sequence[int]) -> list[VJValuation]:
    top, mask, dist = evaluate(g, nxt)
    return [
        VJValuation(g.priority[top[v]], g.mask_priorities(mask[v]), dist[v])
        for v in range(len(nxt))
    ]


def all_valuations(g: ParityGame, sigma, tau) -> list[VJValuation]:
    g.require_strict()
    return valuations_of(g, _profile(g, sigma, tau))


# ---------------------------------------------------------------------------
# best response


def _odd_improve(g: ParityGame, nxt: list[int], key_fn) -> list[Key]:
    """Strategy iteration for Odd on ``nxt`` (Even part fixed), minimising keys."""
    odd = [v for v in g.odd_vertices if len(g.succ[v]) > 1]
    while True:
        keys = key_fn(g, nxt)
        changed = False
        for v in odd:
            cur = keys[nxt[v]]
            best = min(g.succ[v], key=lambda u: (keys[u], u))
            if keys[best] < cur:
                nxt[v] = best
                changed = True
        if not changed:
            break
    # canonical tie-break: lowest id among successors that change nothing
    for v in odd:
        cur = nxt[v]
        for u in sorted(g.succ[v]):
            if u >= cur:
                break
            if keys[u] != keys[cur]:
                continue
            nxt[v] = u
            trial = key_fn(g, nxt)
            if trial == keys:
                break
            nxt[v] = cur
    return keys


def best_response(g: ParityGame, sigma: Mapping[int, int], tau0: Mapping[int, int] | None = None) -> Strategy:
    g.require_strict()
    g.check_strategy(sigma, EVEN)
    nxt = _initial_profile(g, sigma, tau0)
    _odd_improve(g, nxt, keys_of)
    return {v: nxt[v] for v in g.odd_vertices}


def _initial_profile(g, sigma, tau0):
    nxt = []
    for v in g.vertices:
        if g.owner[v] == EVEN:
            nxt.append(sigma[v])
        elif tau0 is not None and v in tau0:
            nxt.append(tau0[v])
        else:
            nxt.append(min(g.succ[v]))
    return nxt


def best_response_bruteforce(g: ParityGame, sigma: Mapping[int, int]) -> list[VJValuation]:
    """Per-vertex ⪯-least valuation over all Odd strategies (test oracle)."""
    g.require_strict()
    odd = list(g.odd_vertices)
    best: list[VJValuation | None] = [None] * len(g)
    for choice in itertools.product(*(g.succ[v] for v in odd)):
        tau = dict(zip(odd, choice))
        for v in g.vertices:
            val = vj_valuation(g, sigma, tau, v)
            if best[v] is None or cmp_valuation(val, best[v]) < 0:
                best[v] = val
    return best  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# switching


@dataclass
class Appeal:
    """Switchable edges at one strategy, with the greedy selection."""

    keys: list[Key]
    tau: Strategy
    switchable: dict[int, list[int]]  # v -> improving successors
    selection: dict[int, int]  # v -> chosen successor
    ties: dict[int, list[int]]  # v -> equally most-appealing successors


def switchable_edges(g: ParityGame, sigma: Mapping[int, int], tau0=None, *, engine: str = "vj") -> Appeal:
    g.require_strict()
    nxt = _initial_profile(g, sigma, tau0)
    keys = _odd_improve(g, nxt, keys_of)
    tau = {v: nxt[v] for v in g.odd_vertices}
    if engine == "simplified":
        _require_terminating(g, nxt)
        keys = [k[1] for k in keys]
    elif engine != "vj":
        raise ValueError(f"unknown engine {engine!r}")
    switchable: dict[int, list[int]] = {}
    selection: dict[int, int] = {}
    ties: dict[int, list[int]] = {}
    for v in g.even_vertices:
        succ = g.succ[v]
        if len(succ) == 1:
            continue
        cur = keys[sigma[v]]
        better = [u for u in succ if keys[u] > cur]
        if not better:
            continue
        switchable[v] = better
        top = max(keys[u] for u in better)
        best = sorted(u for u in better if keys[u] == top)
        selection[v] = best[0]
        if len(best) > 1:
            ties[v] = best
    return Appeal(keys, tau, switchable, selection, ties)


def apply_switches(sigma: Mapping[int, int], switches: Iterable[tuple[int, int]]) -> Strategy:
    out = dict(sigma)
    seen = set()
    for v, u in switches:
        if v in seen:
            raise GameError(f"two switches leave vertex {v}")
        seen.add(v)
        out[v] = u
    return out


# ---------------------------------------------------------------------------
# simplified (one-sink) valuations


def _require_terminating(g: ParityGame, nxt: Sequence[int]) -> None:
    if g.sink is None:
        raise NonTerminatingError("simplified valuations need a designated sink")
    top, _, _ = evaluate(g, nxt)
    bad = [v for v in g.vertices if top[v] != g.sink]
    if bad:
        raise NonTerminatingError(
            f"strategy is not terminating: {g.name(bad[0])} does not reach the sink"
        )


def simplified_valuations(g: ParityGame, sigma, tau=None) -> list[frozenset]:
    if tau is None:
        tau = best_response(g, sigma)
    nxt = _profile(g, sigma, tau)
    _require_terminating(g, nxt)
    vals = all_valuations(g, sigma, tau)
    return [val.S for val in vals]


def simplified_valuation(g: ParityGame, sigma, v: int, tau=None) -> frozenset:
    return simplified_valuations(g, sigma, tau)[v]


def maxdiff_sigma(g: ParityGame, sigma, u: int, v: int, tau=None) -> int:
    vals = simplified_valuations(g, sigma, tau)
    return maxdiff(vals[u], vals[v])


# ---------------------------------------------------------------------------
# the SI loop


@dataclass
class Iteration:
    index: int  # strategy index m: switches lead from sigma_m to sigma_{m+1}
    switched: list[tuple[int, int]]
    ties: dict[int, list[int]]


class Trace:
    """Run record: initial strategy, best responses and switch sets.

    Strategies are stored as deltas; keyframes every ``keyframe`` iterations
    make :meth:`strategy_at` cheap for long runs.
    """

    def __init__(self, sigma0: Mapping[int, int], keyframe: int = 64):
        self.sigma0 = dict(sigma0)
        self.iterations: list[Iteration] = []
        self.responses: list[Strategy] = []  # best response to sigma_m
        self.keyframe = keyframe
        self._frames = {0: dict(sigma0)}

    def __len__(self) -> int:
        return len(self.iterations)

    def record(self, switched, ties, tau) -> None:
        it = Iteration(len(self.iterations), list(switched), dict(ties))
        self.iterations.append(it)
        self.responses.append(dict(tau))
        m = len(self.iterations)
        if m % self.keyframe == 0:
            base = self.strategy_at(m - 1)
            self._frames[m] = apply_switches(base, it.switched)

    def strategy_at(self, m: int) -> Strategy:
        if not 0 <= m <= len(self.iterations):
            raise IndexError(m)
        k = max(f for f in self._frames if f <= m)
        sigma = dict(self._frames[k])
        for it in self.iterations[k:m]:
            sigma.update(it.switched)
        return sigma

    def switch_sets(self) -> list[frozenset]:
        return [frozenset(it.switched) for it in self.iterations]

    def to_jsonl(self, names: Sequence[str] | None = None) -> str:
        import json

        def nm(v):
            return names[v] if names else v

        lines = []
        for it in self.iterations:
            lines.append(
                json.dumps(
                    {
                        "iteration": it.index,
                        "switched": [{"from": nm(v), "to": nm(u)} for v, u in it.switched],
                        "ties": [
                            {"vertex": nm(v), "targets": [nm(u) for u in us]}
                            for v, us in sorted(it.ties.items())
                        ],
                    }
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class RunResult:
    trace: Trace
    final: Strategy
    final_tau: Strategy
    optimal: bool  # no switchable edge remains at ``final``
    decreases: int = 0  # iterations in which some valuation went down
    nonstrict: int = 0  # iterations in which no valuation went up
    tie_count: int = 0
    stopped: bool = False  # a hook ended the run early

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def budget_exhausted(self) -> bool:
        return not (self.optimal or self.stopped)

    @property
    def monotone_violations(self) -> int:
        return self.decreases + self.nonstrict


Hook = Callable[[int, Strategy, Appeal], "bool | None"]


def si_run(
    g: ParityGame,
    sigma0: Mapping[int, int],
    budget: int | None = None,
    hooks: Sequence[Hook] = (),
    *,
    engine: str = "vj",
    check_monotone: bool = True,
) -> RunResult:
    """Greedy all-switches strategy improvement.

    Every hook is called as ``hook(m, sigma_m, appeal_m)`` before the switch
    set of iteration ``m`` is applied (and once more at the final strategy).
    A hook returning ``True`` stops the run after that call.
    """
    g.require_strict()
    g.check_strategy(sigma0, EVEN)
    sigma = dict(sigma0)
    trace = Trace(sigma)
    tau = None
    prev_keys = None
    res = RunResult(trace, sigma, {}, False)
    m = 0
    while True:
        appeal = switchable_edges(g, sigma, tau, engine=engine)
        tau = appeal.tau
        if check_monotone and prev_keys is not None:
            down, up = _compare_keys(prev_keys, appeal.keys)
            res.decreases += down
            res.nonstrict += not up
        stop = False
        for hook in hooks:
            stop = bool(hook(m, sigma, appeal)) or stop
        done = not appeal.selection
        if done or stop or (budget is not None and m >= budget):
            trace.responses.append(dict(tau))
            res.final, res.final_tau = sigma, tau
            res.optimal, res.stopped = done, stop and not done
            return res
        switched = sorted(appeal.selection.items())
        res.tie_count += len(appeal.ties)
        trace.record(switched, appeal.ties, tau)
        sigma = apply_switches(sigma, switched)
        prev_keys = appeal.keys
        m += 1


def _compare_keys(old: Sequence, new: Sequence) -> tuple[bool, bool]:
    """(some key decreased, some key increased)."""
    down = up = False
    for a, b in zip(old, new):
        if b < a:
            down = True
        elif b > a:
            up = True
    return down, up


def winning_sets(g: ParityGame, sigma_opt: Mapping[int, int]) -> tuple[frozenset, frozenset]:
    tau = best_response(g, sigma_opt)
    top, _, _ = evaluate(g, _profile(g, sigma_opt, tau))
    w0 = frozenset(v for v in g.vertices if g.priority[top[v]] % 2 == 0)
    return w0, frozenset(g.vertices) - w0


def solve(g: ParityGame, sigma0=None, budget=None) -> tuple[frozenset, frozenset]:
    res = si_run(g, sigma0 or g.default_strategy(), budget)
    if not res.optimal:
        raise RuntimeError("budget exhausted before the optimum was reached")
    return winning_sets(g, res.final)


# ---------------------------------------------------------------------------
# brute-force oracles


def _cycle_max(g: ParityGame, nxt: Sequence[int]) -> list[int]:
    top, _, _ = evaluate_tops(g, nxt)
    return [g.priority[t] for t in top]


def evaluate_tops(g, nxt):
    """Like :func:`evaluate` but valid for non-strict games (tops only)."""
    pri = g.priority
    N = len(nxt)
    state = bytearray(N)
    top = [0] * N
    for start in range(N):
        if state[start]:
            continue
        path = []
        v = start
        while not state[v]:
            state[v] = 1
            path.append(v)
            v = nxt[v]
        if state[v] == 1:
            i = path.index(v)
            cyc = path[i:]
            del path[i:]
            u = max(cyc, key=pri.__getitem__)
            for c in cyc:
                top[c] = u
                state[c] = 2
        for c in reversed(path):
            top[c] = top[nxt[c]]
            state[c] = 2
    return top, None, None


def brute_force_winning(g: ParityGame) -> tuple[frozenset, frozenset]:
    """Positional minimax over all strategy pairs."""
    ev, od = list(g.even_vertices), list(g.odd_vertices)
    even_wins = set()
    nxt = [0] * len(g)
    odd_choices = list(itertools.product(*(g.succ[v] for v in od)))
    for sc in itertools.product(*(g.succ[v] for v in ev)):
        for v, u in zip(ev, sc):
            nxt[v] = u
        safe = set(g.vertices)
        for tc in odd_choices:
            for v, u in zip(od, tc):
                nxt[v] = u
            cm = _cycle_max(g, nxt)
            safe = {v for v in safe if cm[v] % 2 == 0}
            if not safe:
                break
        even_wins |= safe
    w0 = frozenset(even_wins)
    return w0, frozenset(g.vertices) - w0


def optimal_valuations_bruteforce(g: ParityGame) -> tuple[list[VJValuation], list[Strategy]]:
    """Pointwise ⪯-greatest valuation over all Even strategies, and the
    strategies attaining it everywhere."""
    ev = list(g.even_vertices)
    table = []
    for sc in itertools.product(*(g.succ[v] for v in ev)):
        sigma = dict(zip(ev, sc))
        table.append((sigma, best_response_bruteforce(g, sigma)))
    best = list(table[0][1])
    for _, vals in table[1:]:
        for v in g.vertices:
            if cmp_valuation(vals[v], best[v]) > 0:
                best[v] = vals[v]
    optimal = [s for s, vals in table if all(vals[v] == best[v] for v in g.vertices)]
    return best, optimal


# ---------------------------------------------------------------------------
# one-sink check


@dataclass
class OneSinkVerdict:
    structural: bool
    semantic: bool | None  # None: not checked
    reason: str = ""


def is_one_sink(g: ParityGame, semantic_limit: int = 4096) -> OneSinkVerdict:
    sinks = [v for v in g.vertices if g.priority[v] == 1]
    if 0 in g.priority:
        return OneSinkVerdict(False, None, "priority 0 present")
    if len(sinks) != 1:
        return OneSinkVerdict(False, None, "need exactly one vertex of priority 1")
    x = sinks[0]
    if g.succ[x] != (x,):
        return OneSinkVerdict(False, None, "sink must have only its self-loop")
    if g.sink is not None and g.sink != x:
        return OneSinkVerdict(False, None, "declared sink does not carry priority 1")
    if not g.is_strict:
        return OneSinkVerdict(False, None, "priorities not distinct")
    size = 1
    for v in g.vertices:
        size *= len(g.succ[v])
    if size > semantic_limit:
        return OneSinkVerdict(True, None, "semantic check skipped: game too large")
    best, _ = optimal_valuations_bruteforce(g)
    ok = all(val.p == 1 for val in best)
    return OneSinkVerdict(True, ok, "" if ok else "an optimal strategy avoids the sink")


# ---------------------------------------------------------------------------
# PGSolver text format


def to_pgsolver(g: ParityGame) -> str:
    lines = [f"parity {len(g) - 1};"]
    for v in g.vertices:
        succ = ",".join(map(str, g.succ[v]))
        name = f' "{g.names[v]}"' if g.names else ""
        lines.append(f"{v} {g.priority[v]} {g.owner[v]} {succ}{name};")
    return "\n".join(lines) + "\n"


def from_pgsolver(text: str) -> ParityGame:
    import re

    rows = {}
    named = False
    pattern = re.compile(r'^\s*(\d+)\s+(\d+)\s+([01])\s+([\d,\s]+?)\s*(?:"([^"]*)")?\s*;?\s*$')
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("parity") or line.startswith("start"):
            continue
        m = pattern.match(line)
        if not m:
            raise GameError(f"line {lineno}: cannot parse {raw!r}")
        v, p, o, succ, name = m.groups()
        succ_ids = tuple(int(s) for s in succ.replace(" ", "").split(",") if s)
        if int(v) in rows:
            raise GameError(f"line {lineno}: vertex {v} defined twice")
        rows[int(v)] = (int(o), int(p), succ_ids, name)
        named = named or name is not None
    if sorted(rows) != list(range(len(rows))):
        raise GameError("vertex ids must be 0..n-1")
    n = len(rows)
    owner = [rows[v][0] for v in range(n)]
    pri = [rows[v][1] for v in range(n)]
    succ = [rows[v][2] for v in range(n)]
    names = [rows[v][3] or str(v) for v in range(n)] if named else None
    sinks = [v for v in range(n) if pri[v] == 1 and succ[v] == (v,)]
    return ParityGame.from_lists(owner, pri, succ, names, sinks[0] if len(sinks) == 1 else None)


def strategy_to_text(sigma: Mapping[int, int]) -> str:
    return "".join(f"{v} {u}\n" for v, u in sorted(sigma.items()))


# ---------------------------------------------------------------------------
# random instances


def random_game(rng, n: int, max_out: int = 3, *, priorities: Sequence[int] | None = None) -> ParityGame:
    """Strict random game on ``n`` vertices (self-loops allowed)."""
    pri = list(priorities) if priorities is not None else rng.sample(range(1, 3 * n + 1), n)
    owner = [rng.randrange(2) for _ in range(n)]
    succ = []
    for _ in range(n):
        k = rng.randint(1, min(max_out, n))
        succ.append(sorted(rng.sample(range(n), k)))
    return ParityGame.from_lists(owner, pri, succ)


def random_one_sink_game(rng, n: int, max_out: int = 2, tries: int = 1000) -> ParityGame:
    """Random game with sink ``0`` whose optimal strategies all reach the sink.

    Candidates are drawn with every non-sink vertex having some path to the
    sink and then filtered semantically with the strategy improvement solver.
    """
    for _ in range(tries):
        pri = [1] + rng.sample(range(2, 3 * n + 2), n - 1)
        owner = [EVEN] + [rng.randrange(2) for _ in range(n - 1)]
        succ = [[0]]
        for v in range(1, n):
            k = rng.randint(1, max_out)
            # one edge to a lower-numbered vertex guarantees reachability of 0
            first = rng.randrange(v)
            rest = rng.sample(range(1, n), min(k - 1, n - 1))
            succ.append(sorted({first, *rest}))
        g = ParityGame.from_lists(owner, pri, succ, sink=0)
        res = si_run(g, g.default_strategy())
        top, _, _ = evaluate(g, _profile(g, res.final, res.final_tau))
        if all(t == 0 for t in top):
            return g
    raise RuntimeError("no one-sink game found")
