"""Cube orientations induced by binary one-sink games, and BottomAntipodal.

Cube vertices are ints: bit ``k`` set means choice vertex ``k`` takes its
second successor.  The outgoing dimensions of a cube vertex are the choice
vertices whose other edge is switchable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .game import ParityGame, si_run, switchable_edges

MAX_EXHAUSTIVE = 12


class CubeError(ValueError):
    pass


@dataclass
class CubeOrientation:
    d: int
    out_fn: Callable[[int], int]  # cube vertex -> bitmask of outgoing dimensions
    dims: list = field(default_factory=list)  # choice vertex of each dimension
    _cache: dict = field(default_factory=dict, repr=False)

    def out(self, x: int) -> int:
        if not 0 <= x < 1 << self.d:
            raise CubeError(f"cube vertex {x} outside the {self.d}-cube")
        got = self._cache.get(x)
        if got is None:
            got = self._cache[x] = self.out_fn(x)
        return got

    @classmethod
    def from_table(cls, d: int, table: Mapping[int, int] | list) -> "CubeOrientation":
        tab = dict(enumerate(table)) if isinstance(table, list) else dict(table)
        return cls(d, tab.__getitem__)

    def outgoing(self, x: int) -> list[int]:
        o = self.out(x)
        return [k for k in range(self.d) if o >> k & 1]


@dataclass
class BinaryGame:
    """A binary one-sink game with its cube coordinates."""

    game: ParityGame
    dims: list  # choice vertices (out-degree 2), in id order
    fixed: dict  # strategy at the other Even vertices

    def strategy(self, x: int) -> dict:
        g = self.game
        sigma = dict(self.fixed)
        for k, v in enumerate(self.dims):
            sigma[v] = g.succ[v][x >> k & 1]
        return sigma

    def vertex(self, sigma: Mapping[int, int]) -> int:
        g = self.game
        return sum(1 << k for k, v in enumerate(self.dims) if sigma[v] == g.succ[v][1])


def to_cube(g: ParityGame, sigma_fixed: Mapping[int, int] | None = None) -> tuple[CubeOrientation, BinaryGame]:
    choice = []
    fixed = {}
    for v in g.even_vertices:
        deg = len(g.succ[v])
        if deg > 2:
            raise CubeError(f"Even vertex {g.name(v)} has out-degree {deg} > 2")
        if deg == 2:
            choice.append(v)
        else:
            fixed[v] = g.succ[v][0]
    if sigma_fixed:
        fixed.update({v: u for v, u in sigma_fixed.items() if v in fixed})
    bg = BinaryGame(g, choice, fixed)

    def out_fn(x: int) -> int:
        appeal = switchable_edges(g, bg.strategy(x))
        mask = 0
        for k, v in enumerate(choice):
            if v in appeal.switchable:
                mask |= 1 << k
        return mask

    return CubeOrientation(len(choice), out_fn, choice), bg


def _guard(c: CubeOrientation) -> None:
    if c.d > MAX_EXHAUSTIVE:
        raise CubeError(f"exhaustive checks refused for d = {c.d} > {MAX_EXHAUSTIVE}")


@dataclass
class CubeVerdict:
    ok: bool
    reason: str = ""
    witness: tuple | None = None


def validate_uso(c: CubeOrientation) -> CubeVerdict:
    """Consistent edge orientation and exactly one sink in every face."""
    _guard(c)
    N = 1 << c.d
    outs = [c.out(x) for x in range(N)]
    for x in range(N):
        for k in range(c.d):
            y = x ^ (1 << k)
            if x < y and (outs[x] >> k & 1) == (outs[y] >> k & 1):
                return CubeVerdict(False, "edge oriented inconsistently", (x, k))
    for free in range(N):
        fixed = ~free & (N - 1)
        sinks: dict[int, int] = {}
        for x in range(N):
            if not outs[x] & free:
                base = x & fixed
                sinks[base] = sinks.get(base, 0) + 1
        faces = 1 << (c.d - bin(free).count("1"))
        if len(sinks) != faces:
            return CubeVerdict(False, "face without a sink", (free,))
        for base, cnt in sinks.items():
            if cnt != 1:
                return CubeVerdict(False, "face with several sinks", (free, base))
    return CubeVerdict(True)


def validate_acyclic(c: CubeOrientation) -> CubeVerdict:
    _guard(c)
    N = 1 << c.d
    indeg = [0] * N
    for x in range(N):
        for k in c.outgoing(x):
            indeg[x ^ (1 << k)] += 1
    stack = [x for x in range(N) if indeg[x] == 0]
    seen = 0
    while stack:
        x = stack.pop()
        seen += 1
        for k in c.outgoing(x):
            y = x ^ (1 << k)
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    if seen != N:
        return CubeVerdict(False, "directed cycle", (next(x for x in range(N) if indeg[x]),))
    return CubeVerdict(True)


def bottom_antipodal(c: CubeOrientation, start: int) -> list[int]:
    """Vertices visited after ``start``, jumping to the antipode of the
    subcube spanned by the outgoing edges until a sink is reached."""
    seq = []
    x = start
    for _ in range(1 << c.d):
        o = c.out(x)
        if not o:
            return seq
        x ^= o
        seq.append(x)
    if c.out(x):
        raise CubeError(f"no sink after {1 << c.d} jumps: the orientation is cyclic")
    return seq


def dimension_switch(c: CubeOrientation, start: int, k: int) -> bool:
    prev = start
    for x in bottom_antipodal(c, start):
        if (prev ^ x) >> k & 1:
            return True
        prev = x
    return False


def dump(c: CubeOrientation) -> str:
    """One line per cube vertex: its bits (dimension 0 first) and outgoing dimensions."""
    _guard(c)
    lines = []
    for x in range(1 << c.d):
        bits = "".join(str(x >> k & 1) for k in range(c.d))
        lines.append(f"{bits} {','.join(map(str, c.outgoing(x))) or '-'}")
    return "\n".join(lines) + "\n"


@dataclass
class Correspondence:
    ok: bool
    steps: int
    first_mismatch: tuple | None = None


def si_correspondence(c: CubeOrientation, bg: BinaryGame, start: int) -> Correspondence:
    """Compare BottomAntipodal from ``start`` with greedy all-switches from the
    matching strategy, step by step and at the end."""
    g = bg.game
    run = si_run(g, bg.strategy(start), check_monotone=False)
    for it in run.trace.iterations:
        for v, _ in it.switched:
            # with two successors the greedy choice is forced
            if len(g.succ[v]) != 2:
                return Correspondence(False, it.index, ("non-choice vertex switched", v))
    ba = bottom_antipodal(c, start)
    si_seq = [bg.vertex(run.trace.strategy_at(m)) for m in range(1, len(run.trace) + 1)]
    if ba != si_seq:
        i = next((i for i, (a, b) in enumerate(zip(ba, si_seq)) if a != b), min(len(ba), len(si_seq)))
        return Correspondence(False, i, ("sequence", ba[i : i + 1], si_seq[i : i + 1]))
    if not run.optimal or (ba and ba[-1] != bg.vertex(run.final)):
        return Correspondence(False, len(ba), ("terminal",))
    return Correspondence(True, len(ba))

