"""Boolean circuits F: {0,1}^n -> {0,1}^n built from Or and Not gates.

Indices are 1-based.  Indices ``1..n`` are the inputs, ``n+1..n+k`` the gates
(in topological order) and the last ``n`` indices ``k+1..k+n`` the outputs, so
output bit ``i`` is index ``k+i``.  Bit strings are tuples with ``B[0]`` being
bit 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

OR, NOT = "or", "not"

BitString = tuple


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    in1: int
    in2: int | None = None

    @property
    def inputs(self) -> tuple[int, ...]:
        return (self.in1,) if self.kind == NOT else (self.in1, self.in2)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]

    @property
    def k(self) -> int:
        return len(self.gates)

    @property
    def size(self) -> int:
        return self.n + self.k

    def gate(self, i: int) -> Gate:
        if not self.n < i <= self.size:
            raise CircuitError(f"index {i} is not a gate")
        return self.gates[i - self.n - 1]

    def output(self, bit: int) -> int:
        return self.k + bit

    @cached_property
    def depth(self) -> tuple[int, ...]:
        """``depth[i]`` for i in 0..n+k (entry 0 unused)."""
        d = [0] * (self.size + 1)
        for i in range(self.n + 1, self.size + 1):
            d[i] = 1 + max(d[j] for j in self.gate(i).inputs)
        return tuple(d)

    @property
    def output_depth(self) -> int:
        depths = {self.depth[self.output(b)] for b in range(1, self.n + 1)}
        if len(depths) != 1:
            raise CircuitError("outputs do not share a depth")
        return depths.pop()

    # -- evaluation -------------------------------------------------------

    def values(self, B: Sequence[int]) -> list[int]:
        if len(B) != self.n:
            raise CircuitError(f"input has {len(B)} bits, expected {self.n}")
        val = [0] + [int(b) for b in B] + [0] * self.k
        for i in range(self.n + 1, self.size + 1):
            g = self.gate(i)
            if g.kind == NOT:
                val[i] = 1 - val[g.in1]
            else:
                val[i] = val[g.in1] | val[g.in2]
        return val

    def eval_gate(self, B: Sequence[int], i: int) -> int:
        return self.values(B)[i]

    def apply(self, B: Sequence[int]) -> BitString:
        val = self.values(B)
        return tuple(val[self.k + 1 :])

    def iterate(self, B: Sequence[int], t: int) -> BitString:
        if t < 0:
            raise CircuitError("iteration count must be non-negative")
        B = tuple(B)
        for _ in range(t):
            B = self.apply(B)
        return B

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        gates = []
        for g in self.gates:
            row = {"kind": g.kind, "in1": g.in1}
            if g.kind == OR:
                row["in2"] = g.in2
            gates.append(row)
        return {"n": self.n, "gates": gates}

    @classmethod
    def from_json(cls, data: dict | str) -> "Circuit":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            rows = list(data["gates"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CircuitError(f"circuit JSON needs 'n' and 'gates': {exc}") from None
        gates = []
        for pos, row in enumerate(rows):
            kind = str(row.get("kind", "")).lower()
            if kind == "input":
                continue
            if kind not in (OR, NOT):
                raise CircuitError(f"gate {pos}: unknown kind {row.get('kind')!r}")
            try:
                in1 = int(row["in1"])
                in2 = int(row["in2"]) if kind == OR else None
            except (KeyError, TypeError, ValueError):
                raise CircuitError(f"gate {pos}: missing or bad input index") from None
            gates.append(Gate(kind, in1, in2))
        c = cls(n, tuple(gates))
        validate(c, normal=False)
        return c


def Not(i: int) -> Gate:
    return Gate(NOT, i)


def Or(i: int, j: int) -> Gate:
    return Gate(OR, i, j)


# ---------------------------------------------------------------------------
# validation and normal form


def validate(c: Circuit, normal: bool = True) -> None:
    """Raise :class:`CircuitError` naming the first violated assumption."""
    if c.n < 1:
        raise CircuitError("need at least one input bit")
    if c.k < c.n:
        raise CircuitError("need at least n gates so that outputs are gates")
    for i in range(c.n + 1, c.size + 1):
        g = c.gate(i)
        if g.kind not in (OR, NOT):
            raise CircuitError(f"gate {i}: kind must be or/not")
        for j in g.inputs:
            if j is None or not 1 <= j < i:
                raise CircuitError(f"gate {i}: input {j} is not an earlier index")
    if not normal:
        return
    d = c.depth
    for i in range(c.n + 1, c.size + 1):
        g = c.gate(i)
        if g.kind == OR and d[g.in1] != d[g.in2]:
            raise CircuitError(f"gate {i}: or-inputs at depths {d[g.in1]} and {d[g.in2]}")
    c.output_depth  # raises if outputs disagree


def is_normal(c: Circuit) -> bool:
    try:
        validate(c)
    except CircuitError:
        return False
    return True


def pad_depths(c: Circuit) -> Circuit:
    """Equivalent circuit in which or-gates see inputs of equal depth and all
    outputs share one depth, using dummy or-gates ``Or(i, i)``."""
    validate(c, normal=False)
    if is_normal(c):
        return c
    n = c.n
    new: list[Gate] = []
    depth: dict[int, int] = {i: 0 for i in range(1, n + 1)}
    remap: dict[int, int] = {i: i for i in range(1, n + 1)}

    def emit(g: Gate) -> int:
        new.append(g)
        idx = n + len(new)
        depth[idx] = 1 + max(depth[j] for j in g.inputs)
        return idx

    def lift(idx: int, target: int) -> int:
        while depth[idx] < target:
            idx = emit(Or(idx, idx))
        return idx

    outputs = {c.output(b) for b in range(1, n + 1)}
    for i in range(n + 1, c.size + 1):
        g = c.gate(i)
        if g.kind == NOT:
            remap[i] = emit(Not(remap[g.in1]))
        else:
            a, b = remap[g.in1], remap[g.in2]
            top = max(depth[a], depth[b])
            remap[i] = emit(Or(lift(a, top), lift(b, top)))
    # outputs are buffered to a common depth and placed last, in bit order
    top = max(depth[remap[o]] for o in outputs) + 1
    heads = [lift(remap[c.output(b)], top - 1) for b in range(1, n + 1)]
    for h in heads:
        emit(Or(h, h))
    out = Circuit(n, tuple(new))
    validate(out)
    return out


def negate(c: Circuit) -> Circuit:
    """Append a not-gate above every output, giving the bitwise complement."""
    validate(c, normal=False)
    extra = tuple(Not(c.output(b)) for b in range(1, c.n + 1))
    return Circuit(c.n, c.gates + extra)


def prepare(c: Circuit) -> Circuit:
    """Negated normal form as consumed by the game builder."""
    return negate(pad_depths(c))


# ---------------------------------------------------------------------------
# oracles

MAX_ORACLE_BITS = 20


def _orbit_guard(c: Circuit):
    if c.n > MAX_ORACLE_BITS:
        raise CircuitError(f"oracle refused: 2^{c.n} iterations exceed the budget")


def bitswitch_oracle(c: Circuit, B: Sequence[int], z: int) -> bool:
    """Is there an even ``i`` with ``2 <= i <= 2^n`` and ``F^i(B)_z = 1``?"""
    _orbit_guard(c)
    X = tuple(B)
    for i in range(1, 2**c.n + 1):
        X = c.apply(X)
        if i % 2 == 0 and X[z - 1]:
            return True
    return False


def circuitvalue_oracle(c: Circuit, B: Sequence[int], z: int) -> bool:
    _orbit_guard(c)
    return bool(c.iterate(B, 2**c.n)[z - 1])


# ---------------------------------------------------------------------------
# sample circuits


def identity(n: int) -> Circuit:
    return Circuit(n, tuple(Not(i) for i in range(1, n + 1)) + tuple(Not(n + i) for i in range(1, n + 1)))


def xor_gates(a: int, b: int, base: int) -> tuple[list[Gate], int]:
    """Gates computing ``a XOR b`` appended after index ``base``."""
    g = [
        Not(a),  # base+1
        Not(b),  # base+2
        Or(base + 1, b),  # ¬a ∨ b
        Or(a, base + 2),  # a ∨ ¬b
        Not(base + 3),  # a ∧ ¬b
        Not(base + 4),  # ¬a ∧ b
        Or(base + 5, base + 6),
    ]
    return g, base + 7


def increment(n: int = 2) -> Circuit:
    """Add one modulo 2^n; bit 1 is least significant."""
    gates: list[Gate] = []
    idx = n

    def add(g: Gate) -> int:
        nonlocal idx
        gates.append(g)
        idx += 1
        return idx

    carry = None  # index computing AND of bits below
    outs = []
    for b in range(1, n + 1):
        if carry is None:
            outs.append(add(Not(b)))
            carry = b
            continue
        xs, top = xor_gates(b, carry, idx)
        for g in xs:
            add(g)
        outs.append(top)
        if b < n:
            # carry AND b = ¬(¬carry ∨ ¬b)
            nc = add(Not(carry))
            nb = add(Not(b))
            carry = add(Not(add(Or(nc, nb))))
    for o in outs:
        add(Or(o, o))
    return Circuit(n, tuple(gates))


def set_bit(n: int, z: int) -> Circuit:
    """F(B) = B with bit z forced to 1."""
    gates: list[Gate] = []
    outs = []
    for b in range(1, n + 1):
        if b == z:
            gates.append(Not(b))
            gates.append(Or(b, n + len(gates)))
        else:
            gates.append(Not(b))
            gates.append(Not(n + len(gates)))
        outs.append(n + len(gates))
    for o in outs:
        gates.append(Or(o, o))
    return Circuit(n, tuple(gates))


def constant(n: int, bit: int = 1) -> Circuit:
    gates = [Not(1), Or(1, n + 1)]  # tautology at n+2
    one = n + 2
    if not bit:
        gates.append(Not(one))
        one = n + 3
    for _ in range(n):
        gates.append(Or(one, one))
    return Circuit(n, tuple(gates))


def random_circuit(rng, n: int, gates: int) -> Circuit:
    """Random Or/Not circuit whose outputs are the last n gates."""
    gs: list[Gate] = []
    for i in range(n + 1, n + gates + 1):
        if rng.random() < 0.5:
            gs.append(Not(rng.randrange(1, i)))
        else:
            gs.append(Or(rng.randrange(1, i), rng.randrange(1, i)))
    return Circuit(n, tuple(gs))
