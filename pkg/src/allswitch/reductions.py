"""Parity to mean-payoff reduction and gain-bias strategy improvement.

Weights are ``(-m)**p`` for a game with ``m`` vertices, so on constructed
games they have hundreds of millions of bits.  All arithmetic therefore uses
:class:`SparseInt`, an exact integer stored as sparse balanced digits in base
``m``; it agrees with Python ``int`` arithmetic (checked in the tests) but
costs memory proportional to the number of nonzero digits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Mapping, Sequence

from .game import EVEN, ParityGame, Trace, _profile, apply_switches, evaluate, switchable_edges


class SparseInt:
    """Exact integer ``sum(d * base**e)`` with digits in ``[-base//2, base//2]``.

    With that digit bound the lower digits can never outweigh the leading
    one, so the sign of a value is the sign of its leading digit.
    """

    __slots__ = ("base", "d")

    def __init__(self, base: int, digits: Mapping[int, int] | None = None):
        if base < 2:
            raise ValueError("base must be at least 2")
        self.base = base
        self.d: dict[int, int] = {}
        if digits:
            for e in sorted(digits):
                self._add_term(e, digits[e])

    @classmethod
    def power(cls, base: int, p: int, coeff: int = 1) -> "SparseInt":
        out = cls(base)
        out._add_term(p, coeff)
        return out

    @classmethod
    def from_int(cls, base: int, x: int) -> "SparseInt":
        out = cls(base)
        sign, x = (-1 if x < 0 else 1), abs(x)
        e = 0
        while x:
            x, r = divmod(x, base)
            if r > base // 2:
                r -= base
                x += 1
            if r:
                out.d[e] = sign * r
            e += 1
        return out

    def copy(self) -> "SparseInt":
        out = SparseInt.__new__(SparseInt)
        out.base, out.d = self.base, dict(self.d)
        return out

    def _add_term(self, e: int, x: int) -> None:
        b, hi = self.base, self.base // 2
        d = self.d
        while x:
            x += d.get(e, 0)
            if x > hi:
                q = -((hi - x) // b)  # ceil((x - hi) / b)
            elif x < -hi:
                q = (x + hi) // b  # -ceil((-hi - x) / b)
            else:
                q = 0
            x -= q * b
            if x:
                d[e] = x
            else:
                d.pop(e, None)
            x, e = q, e + 1

    def add_term(self, e: int, x: int) -> "SparseInt":
        out = self.copy()
        out._add_term(e, x)
        return out

    def _check(self, other: "SparseInt") -> None:
        if other.base != self.base:
            raise ValueError("mixed bases")

    def __add__(self, other: "SparseInt") -> "SparseInt":
        self._check(other)
        a, b = (self, other) if len(self.d) >= len(other.d) else (other, self)
        out = a.copy()
        for e in sorted(b.d):
            out._add_term(e, b.d[e])
        return out

    def __neg__(self) -> "SparseInt":
        out = SparseInt.__new__(SparseInt)
        out.base, out.d = self.base, {e: -x for e, x in self.d.items()}
        return out

    def __sub__(self, other: "SparseInt") -> "SparseInt":
        return self + (-other)

    def scale(self, k: int) -> "SparseInt":
        out = SparseInt(self.base)
        for e in sorted(self.d):
            out._add_term(e, self.d[e] * k)
        return out

    def sign(self) -> int:
        if not self.d:
            return 0
        return 1 if self.d[max(self.d)] > 0 else -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseInt):
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        raise TypeError("SparseInt is unhashable")

    def __lt__(self, other: "SparseInt") -> bool:
        return (self - other).sign() < 0

    def __int__(self) -> int:
        return sum(x * self.base**e for e, x in self.d.items())

    def bit_estimate(self) -> int:
        """Rough size of the value in bits."""
        return 0 if not self.d else int(max(self.d) * math.log2(self.base)) + 1

    def __repr__(self) -> str:
        terms = " + ".join(f"{x}*{self.base}^{e}" for e, x in sorted(self.d.items(), reverse=True))
        return f"SparseInt({terms or '0'})"


@dataclass
class MeanPayoffGame:
    game: ParityGame  # same graph, owners and sink
    m: int
    exponent: list  # weight(v) = (-m)**exponent[v]; None at the sink

    def weight(self, v: int) -> SparseInt:
        p = self.exponent[v]
        if p is None:
            return SparseInt(max(self.m, 2))
        return SparseInt.power(max(self.m, 2), p, -1 if p % 2 else 1)

    def weight_int(self, v: int) -> int:
        p = self.exponent[v]
        return 0 if p is None else (-self.m) ** p

    def to_text(self, max_digits: int = 100_000) -> str:
        """PGSolver-like listing with decimal weights.  Weights longer than
        ``max_digits`` decimal digits are written as ``(-m)^p``."""
        g = self.game
        lines = [f"mpg {len(g) - 1};"]
        for v in g.vertices:
            p = self.exponent[v]
            if p is None:
                w = "0"
            elif p * math.log10(max(self.m, 2)) <= max_digits:
                w = str(self.weight_int(v))
            else:
                w = f"(-{self.m})^{p}"
            succ = ",".join(map(str, g.succ[v]))
            lines.append(f"{v} {w} {g.owner[v]} {succ} \"{g.name(v)}\";")
        return "\n".join(lines) + "\n"


def to_mean_payoff(g: ParityGame) -> MeanPayoffGame:
    if g.sink is None:
        raise ValueError("the reduction needs a one-sink game with a designated sink")
    exps = [None if v == g.sink else g.priority[v] for v in g.vertices]
    return MeanPayoffGame(g, len(g), exps)


# ---------------------------------------------------------------------------
# gain and bias


@dataclass
class Value:
    """Gain ``W / L`` and bias ``B / L`` of one vertex."""

    W: SparseInt
    L: int
    B: SparseInt

    @property
    def gain(self):
        return _ratio(self.W, self.L)

    @property
    def bias(self):
        return _ratio(self.B, self.L)


def _ratio(x: SparseInt, L: int) -> Fraction:
    return Fraction(int(x), L)


def cmp_value(a: Value, b: Value) -> int:
    """Lexicographic comparison of (gain, bias)."""
    if a.L == b.L:
        c = (a.W - b.W).sign()
        return c or (a.B - b.B).sign()
    c = (a.W.scale(b.L) - b.W.scale(a.L)).sign()
    return c or (a.B.scale(b.L) - b.B.scale(a.L)).sign()


value_key = cmp_to_key(cmp_value)


@dataclass
class GainBias:
    values: list[Value]

    def gain(self, v: int):
        return self.values[v].gain

    def bias(self, v: int):
        return self.values[v].bias


def _profile_values(mpg: MeanPayoffGame, nxt: Sequence[int]) -> list[Value]:
    g = mpg.game
    base = max(mpg.m, 2)
    N = len(nxt)
    vals: list[Value | None] = [None] * N
    state = bytearray(N)
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
            L = len(cyc)
            W = SparseInt(base)
            for c in cyc:
                W = W + mpg.weight(c)
            ref = max(cyc, key=g.priority.__getitem__)
            k = cyc.index(ref)
            # walk backwards around the cycle from the reference vertex
            B = SparseInt(base)
            vals[ref] = Value(W, L, B)
            state[ref] = 2
            for step in range(1, L):
                c = cyc[(k - step) % L]
                B = B + mpg.weight(c).scale(L) - W
                vals[c] = Value(W, L, B)
                state[c] = 2
        for c in reversed(path):
            nv = vals[nxt[c]]
            p = mpg.exponent[c]
            if nv.L == 1 and not nv.W.d:
                # zero gain: the bias is the plain weight sum
                B = nv.B if p is None else nv.B.add_term(p, -1 if p % 2 else 1)
            else:
                B = nv.B + mpg.weight(c).scale(nv.L) - nv.W
            vals[c] = Value(nv.W, nv.L, B)
            state[c] = 2
    return vals  # type: ignore[return-value]


def gain_bias(mpg: MeanPayoffGame, sigma: Mapping[int, int], tau: Mapping[int, int] | None = None) -> GainBias:
    """Gain and bias of every vertex under ``sigma`` and Odd's reply ``tau``
    (by default the gain-bias best response)."""
    if tau is None:
        tau = best_response_mp(mpg, sigma)
    return GainBias(_profile_values(mpg, _profile(mpg.game, sigma, tau)))


def best_response_mp(mpg: MeanPayoffGame, sigma: Mapping[int, int], tau0=None, limit: int = 10_000) -> dict:
    """Odd's reply minimising (gain, bias), by all-switches policy iteration."""
    g = mpg.game
    odd = [v for v in g.odd_vertices if len(g.succ[v]) > 1]
    tau = {v: g.succ[v][0] for v in g.odd_vertices}
    if tau0:
        tau.update({v: u for v, u in tau0.items() if v in tau})
    for _ in range(limit):
        vals = _profile_values(mpg, _profile(g, sigma, tau))
        changed = False
        for v in odd:
            best = min(g.succ[v], key=lambda u: (value_key(vals[u]), u))
            if cmp_value(vals[best], vals[tau[v]]) < 0:
                tau[v] = best
                changed = True
        if not changed:
            return tau
    raise RuntimeError("odd policy iteration did not converge")


# ---------------------------------------------------------------------------
# gain-bias all-switches


@dataclass
class MPRun:
    trace: Trace
    final: dict
    optimal: bool
    argmax_checked: int = 0
    argmax_violations: int = 0
    first_violation: tuple | None = None


def gain_bias_si_run(
    mpg: MeanPayoffGame,
    sigma0: Mapping[int, int],
    budget: int | None = None,
    *,
    check_argmax: bool = False,
) -> MPRun:
    """Greedy all-switches on (gain, bias); ties go to the lowest vertex id.

    With ``check_argmax`` every visited strategy is also evaluated by the
    parity engine, and the successor order at every Even vertex under
    (gain, bias) is compared with the order of the parity S-components.
    """
    g = mpg.game
    sigma = dict(sigma0)
    g.check_strategy(sigma, EVEN)
    trace = Trace(sigma)
    run = MPRun(trace, sigma, False)
    tau = None
    m = 0
    while True:
        tau = best_response_mp(mpg, sigma, tau)
        vals = _profile_values(mpg, _profile(g, sigma, tau))
        if check_argmax:
            _argmax_check(run, m, g, sigma, vals)
        selection, ties = {}, {}
        for v in g.even_vertices:
            succ = g.succ[v]
            if len(succ) == 1:
                continue
            cur = vals[sigma[v]]
            better = [u for u in succ if cmp_value(vals[u], cur) > 0]
            if not better:
                continue
            top = max(better, key=lambda u: value_key(vals[u]))
            best = sorted(u for u in better if cmp_value(vals[u], vals[top]) == 0)
            selection[v] = best[0]
            if len(best) > 1:
                ties[v] = best
        if not selection or (budget is not None and m >= budget):
            trace.responses.append(dict(tau))
            run.final, run.optimal = sigma, not selection
            return run
        switched = sorted(selection.items())
        trace.record(switched, ties, tau)
        sigma = apply_switches(sigma, switched)
        m += 1


def _argmax_check(run: MPRun, m: int, g: ParityGame, sigma, vals: list[Value]) -> None:
    appeal = switchable_edges(g, sigma)
    top, mask, _ = evaluate(g, _profile(g, sigma, appeal.tau))
    for v in g.even_vertices:
        succ = g.succ[v]
        if len(succ) < 2:
            continue
        run.argmax_checked += 1
        if all(top[u] == g.sink for u in succ):
            by_parity = sorted(succ, key=lambda u: g.set_key(mask[u]))
        else:
            by_parity = sorted(succ, key=lambda u: appeal.keys[u])
        by_mp = sorted(succ, key=lambda u: value_key(vals[u]))
        if by_parity != by_mp:
            run.argmax_violations += 1
            if run.first_violation is None:
                run.first_violation = (m, v, by_parity, by_mp)


@dataclass
class Divergence:
    iteration: int
    a: frozenset | None
    b: frozenset | None


def switch_sequence_equal(ta: Trace, tb: Trace) -> tuple[bool, Divergence | None]:
    sa, sb = ta.switch_sets(), tb.switch_sets()
    for i, (x, y) in enumerate(zip(sa, sb)):
        if x != y:
            return False, Divergence(i, x, y)
    if len(sa) != len(sb):
        i = min(len(sa), len(sb))
        return False, Divergence(i, sa[i] if i < len(sa) else None, sb[i] if i < len(sb) else None)
    return True, None
