"""Gadget game compiling circuit iteration into greedy all-switches runs.

Two copies of the circuit (``j = 0, 1``) alternate: copy ``j`` computes F on
the bits stored in the input/output gadgets of copy ``1 - j`` and stores the
result in its own input/output gadgets.  Each copy is paced by a binary
counter ("clock") built from a deceleration lane and bit gadgets.

Vertex keys are tuples whose first entry names the vertex family:

=========================  ==============================================
``("x",)``                 the sink
``("t"|"a", c, l)``        clock lane of clock ``c`` (``c = 2``: third clock)
``("d"|"e"|"g"|"k"|"f"|"h", c, i)``  bit ``i`` of clock ``c``
``("s"|"r", c)``           clock exits
``("or", j, i)``           or-gate ``i`` of copy ``j``
``("nt"|"na", j, i, l)``   lane of not-gate ``i``
``("nd"|"ne"|"no"|"nh", j, i)``  rest of not-gate ``i``
``("y"|"z", j)``           circuit movers of copy ``j``
``("it"|"ia", j, i, l)``   lane of input/output gate ``i``
``("id"|"ie"|"io"|"ip"|"ip1"|"iq0"|"iq1"|"ih0"|"ih1"|"ih2", j, i)``
``("v", u)``               relay in front of ``u`` (optimal-strategy variant)
=========================  ==============================================
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .circuit import NOT, OR, Circuit, validate
from .game import EVEN, ODD, ParityGame

Key = tuple


class BuildError(ValueError):
    pass


# ---------------------------------------------------------------------------
# arithmetic helpers


def pp(c: int, i: int, l: int, j: int, e: int, V: int) -> int:
    return 6 * V * V * c + 6 * V * i + 6 * l + 2 * j + e


def bit(K: int, i: int) -> int:
    return (K >> (i - 1)) & 1


def lsz(K: int, bits: int) -> int | None:
    for i in range(1, bits + 1):
        if not bit(K, i):
            return i
    return None


def nexbit(K: int, i: int, bits: int) -> int | None:
    for l in range(i + 1, bits + 1):
        if bit(K, l):
            return l
    return None


def OC(K: int, j: int) -> int:
    if j == 0:
        if K < 1:
            raise ValueError("the other clock is undefined before K = 1")
        return K - 1
    return K


@dataclass(frozen=True)
class Params:
    n: int
    k: int
    dC: int

    @property
    def base(self) -> int:
        return 2 * self.k + 2 * self.n + 6

    @property
    def lane(self) -> int:
        """Lane length of the gate gadgets: a full clock cycle plus slack, so
        a walking ``d`` never reaches the top while the other copy runs."""
        return self.base + 2 * self.n + 6

    def clock_lane(self, bits: int) -> int:
        return self.base + 2 * bits

    def length(self, K: int, bits: int | None = None) -> int | None:
        z = lsz(K, self.n if bits is None else bits)
        return None if z is None else self.base + 2 * z + 5

    def delay(self, j: int, K: int) -> int | None:
        d0 = self.dC + 3 + 2 * self.n
        if j == 0:
            return d0
        L = self.length(K)
        return None if L is None else L + 2 - d0


# ---------------------------------------------------------------------------
# the built game


@dataclass
class GadgetGame:
    game: ParityGame
    circuit: Circuit
    B: tuple
    z: int
    params: Params
    keys: list
    ids: dict
    args: list  # pp argument tuple per vertex
    sigma0: dict
    watched: tuple[int, int]
    optstrat: bool = False
    third_clock_start: tuple[int, int] | None = None
    repairs: list = field(default_factory=list)
    chi0: dict = field(default_factory=dict)  # partial start strategy behind sigma0

    def id(self, *key) -> int:
        return self.ids[tuple(key)]

    def name(self, v: int) -> str:
        return self.game.name(v)

    def manifest(self) -> dict:
        p = self.params
        return {
            "n": p.n,
            "k": p.k,
            "depth": p.dC,
            "lane": p.lane,
            "vertices": len(self.keys),
            "B": list(self.B),
            "z": self.z,
            "optstrat": self.optstrat,
            "watched": [self.name(self.watched[0]), self.name(self.watched[1])],
            "watched_ids": list(self.watched),
            "circuit": self.circuit.to_json(),
            "keys": [
                {"id": v, "name": self.name(v), "key": list(k), "pp": list(self.args[v])}
                for v, k in enumerate(self.keys)
            ],
            "repairs": self.repairs,
        }

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), indent=1)


def key_name(key: Key) -> str:
    head, *rest = key
    if head == "v":
        return "v[" + key_name(tuple(rest[0])) + "]"
    return head + "".join(f"_{x}" for x in rest)


REPAIRS = [
    "lane top t_0 raised above every lane a_l (table value collides with a_l)",
    "input/output relay p_{i,1} placed just above its lane top",
    "or-gadget g_i also has the edge to k_i used by the bit strategy",
    "input/output vertices o_i, h_{i,1}, h_{i,2}, q_{i,1} get per-gate priorities",
    "input/output lane vertex t_{i,1} included",
    "input/output lane wired to p_i at position d(C)+1",
    "gate lanes lengthened to base+2n+6 so they outlast a full clock cycle",
    "q_{i,1} targets r^{1-j}",
    "sink priority pp(0,0,0,0,1) = 1",
]

OPT_REPAIRS = [
    "third clock has n+1 bits and lane base+2(n+1)",
    "e of third-clock top bit keeps only the edge to d",
    "relay v_u priority pp(0,0,u,0,0)",
    "third clock phase chosen so its top bit flips while copy 1 stores F^(2^n)(B)",
]


class _Builder:
    def __init__(self):
        self.keys: list[Key] = []
        self.ids: dict[Key, int] = {}
        self.owner: list[int] = []
        self.args: list[tuple] = []
        self.out: list[list[Key]] = []

    def add(self, key: Key, owner: int, args: tuple, succ: Iterable[Key]):
        if key in self.ids:
            raise BuildError(f"vertex {key} added twice")
        self.ids[key] = len(self.keys)
        self.keys.append(key)
        self.owner.append(owner)
        self.args.append(args)
        seen = []
        for s in succ:
            if s not in seen:
                seen.append(s)
        self.out.append(seen)

    def finish(self, sink: Key) -> ParityGame:
        V = len(self.keys)
        used: dict[tuple, Key] = {}
        for key, a in zip(self.keys, self.args):
            if a in used:
                raise BuildError(f"pp tuple {a} used by {used[a]} and {key}")
            c, i, l, j, e = a
            if not (0 <= i < V and 0 <= l < V and 0 <= j <= 2 and e in (0, 1)):
                raise BuildError(f"pp tuple {a} of {key} out of range")
            used[a] = key
        pri = [pp(*a, V) for a in self.args]
        if 0 in pri:
            raise BuildError("priority 0 emitted")
        succ = []
        for key, targets in zip(self.keys, self.out):
            try:
                succ.append([self.ids[t] for t in targets])
            except KeyError as exc:
                raise BuildError(f"{key}: dangling successor {exc.args[0]}") from None
        names = [key_name(k) for k in self.keys]
        return ParityGame.from_lists(self.owner, pri, succ, names, self.ids[sink])


def _clock(b: _Builder, P: Params, c: int, bits: int, cut_top: bool = False) -> None:
    L = P.clock_lane(bits)
    s, r = ("s", c), ("r", c)
    b.add(("t", c, 0), EVEN, (2, 0, L + 2, c, 0), [r, s])
    for l in range(1, L + 1):
        b.add(("t", c, l), EVEN, (2, 0, l, c, 1), [r, s, ("t", c, l - 1)])
        b.add(("a", c, l), EVEN, (2, 0, l + 1, c, 0), [("t", c, l)])
    for i in range(1, bits + 1):
        lane = [("a", c, l) for l in range(1, P.base + 2 * i + 1)]
        b.add(("d", c, i), EVEN, (1, i, 0, c, 1), [("e", c, i), s, r] + lane)
        if cut_top and i == bits:
            b.add(("e", c, i), ODD, (1, i, 1, c, 0), [("d", c, i)])
        else:
            b.add(("e", c, i), ODD, (1, i, 1, c, 0), [("h", c, i), ("d", c, i)])
        b.add(("g", c, i), EVEN, (1, i, 2, c, 1), [("f", c, i), ("k", c, i)])
        b.add(("k", c, i), EVEN, (8, i, 0, c, 1), [("x",)] + [("g", c, l) for l in range(i + 1, bits + 1)])
        b.add(("f", c, i), EVEN, (8, i, 1, c, 1), [("e", c, i)])
        b.add(("h", c, i), EVEN, (8, i, 2, c, 0), [("k", c, i)])
    b.add(s, EVEN, (7, 0, 0, c, 0), [("x",)] + [("f", c, l) for l in range(1, bits + 1)])
    b.add(r, EVEN, (7, 0, 1, c, 0), [("x",)] + [("g", c, l) for l in range(1, bits + 1)])


def _gate_output(C: Circuit, j: int, q: int) -> Key:
    """Vertex representing the value of index ``q`` as seen by copy ``j``."""
    if q <= C.n:
        return ("io", 1 - j, q)
    return ("or", j, q) if C.gate(q).kind == OR else ("no", j, q)


def _gates(b: _Builder, P: Params, C: Circuit, j: int) -> None:
    L = P.lane
    s, r = ("s", j), ("r", j)
    for i in range(C.n + 1, C.size + 1):
        g = C.gate(i)
        D = C.depth[i]
        if g.kind == OR:
            ins = [_gate_output(C, j, g.in1), _gate_output(C, j, g.in2)]
            b.add(("or", j, i), EVEN, (4, i, 0, j, 1), [s, r] + ins)
            continue
        b.add(("nt", j, i, 0), EVEN, (5, i, L + 2, j, 0), [r, s])
        for l in range(1, L + 1):
            if l == D:
                b.add(("nt", j, i, l), EVEN, (5, i, l, j, 1), [_gate_output(C, j, g.in1)])
                b.add(("na", j, i, l), EVEN, (4, i, 0, j, 0), [("nt", j, i, l)])
            else:
                b.add(("nt", j, i, l), EVEN, (5, i, l, j, 1), [r, s, ("nt", j, i, l - 1)])
                b.add(("na", j, i, l), EVEN, (5, i, l + 1, j, 0), [("nt", j, i, l)])
        lane = [("na", j, i, l) for l in range(1, L + 1)]
        b.add(("nd", j, i), EVEN, (4, i, 0, j, 1), [s, r, ("ne", j, i)] + lane)
        b.add(("ne", j, i), ODD, (4, i, 1, j, 0), [("nh", j, i), ("nd", j, i)])
        b.add(("no", j, i), EVEN, (6, i, 0, j, 1), [("ne", j, i)])
        b.add(("nh", j, i), EVEN, (6, i, 1, j, 0), [r])


def _io(b: _Builder, P: Params, C: Circuit, j: int) -> None:
    L, D, G = P.lane, P.dC, C.size
    y, z = ("y", j), ("z", j)
    r, s, r_ = ("r", j), ("s", j), ("r", 1 - j)
    b.add(y, EVEN, (3, 0, 1, j, 0), [r_, r])
    b.add(z, EVEN, (3, 0, 0, j, 0), [r, s])
    for i in range(1, C.n + 1):
        b.add(("it", j, i, 0), EVEN, (5, i, L + 2, j, 0), [y, z])
        for l in range(1, L + 1):
            if l == D + 1:
                b.add(("it", j, i, l), EVEN, (5, i, l, j, 1), [("ip", j, i)])
            else:
                b.add(("it", j, i, l), EVEN, (5, i, l, j, 1), [y, z, ("it", j, i, l - 1)])
            b.add(("ia", j, i, l), EVEN, (5, i, l + 1, j, 0), [("it", j, i, l)])
        b.add(("ip", j, i), EVEN, (3, i, 2, j, 0), [_gate_output(C, j, C.output(i)), ("ip1", j, i)])
        b.add(("ip1", j, i), EVEN, (5, i, L + 3, j, 0), [r_])
        lane = [("ia", j, i, l) for l in range(1, L + 1)]
        b.add(("id", j, i), EVEN, (4, i, 0, j, 1), [y, z, ("ie", j, i)] + lane)
        b.add(("ie", j, i), ODD, (4, i, 1, j, 0), [("ih0", j, i), ("id", j, i)])
        b.add(("iq0", j, i), ODD, (4, i, 2, j, 0), [("ie", j, i), ("iq1", j, i)])
        b.add(("iq1", j, i), EVEN, (6, G + 2, i, j, 0), [r_])
        b.add(("io", j, i), EVEN, (6, 0, 2 * i, j, 1), [("iq0", j, i)])
        b.add(("ih0", j, i), EVEN, (3, i, 3, j, 0), [("ih1", j, i), ("ih2", j, i)])
        b.add(("ih1", j, i), EVEN, (6, G + 1, i, j, 0), [r])
        b.add(("ih2", j, i), EVEN, (6, 0, 2 * i + 1, j, 0), [r_])


def _check_input(C: Circuit, B, z: int) -> tuple:
    validate(C)
    B = tuple(int(b) for b in B)
    if len(B) != C.n or any(b not in (0, 1) for b in B):
        raise BuildError(f"B must be a {C.n}-bit string")
    if not 1 <= z <= C.n:
        raise BuildError(f"z must lie in 1..{C.n}")
    # the negated form ends in a layer of not-gates over the old outputs
    for b in range(1, C.n + 1):
        if C.gate(C.output(b)).kind != NOT:
            raise BuildError("circuit must be in negated form (outputs are not-gates)")
    return B


def _assemble(C: Circuit, B, z: int, optstrat: bool) -> tuple[_Builder, Params]:
    P = Params(C.n, C.k, C.output_depth)
    b = _Builder()
    b.add(("x",), EVEN, (0, 0, 0, 0, 1), [("x",)])
    for j in (0, 1):
        _clock(b, P, j, C.n)
    if optstrat:
        _clock(b, P, 2, C.n + 1, cut_top=True)
    for j in (0, 1):
        _io(b, P, C, j)
    for j in (0, 1):
        _gates(b, P, C, j)
    if optstrat:
        d = b.ids[("id", 1, z)]
        targets = list(b.out[d])
        relays = []
        for u, t in enumerate(targets, 1):
            rk = ("v", t)
            b.add(rk, EVEN, (0, 0, u, 0, 0), [t, ("f", 2, C.n + 1)])
            relays.append(rk)
        b.out[d] = relays
    return b, P


def build(C: Circuit, B, z: int) -> GadgetGame:
    """Gadget game for (F, B, z) with ``C`` the negated normal form of F."""
    B = _check_input(C, B, z)
    b, P = _assemble(C, B, z, optstrat=False)
    g = b.finish(("x",))
    gg = GadgetGame(
        g, C, B, z, P, b.keys, b.ids, b.args, {}, (b.ids[("id", 1, z)], b.ids[("ie", 1, z)]),
        repairs=list(REPAIRS),
    )
    gg.chi0 = predict(gg, B, 1, 0, 2)
    gg.sigma0 = materialize(gg, gg.chi0)
    return gg


def build_clock(n: int, k: int = 0, K: int = 0) -> GadgetGame:
    """A single clock (``c = 0``) on ``n`` bits, started at kappa^K_1.

    ``k`` only sets the lane length, as if the clock paced ``k`` gates.
    """
    if n < 1:
        raise BuildError("a clock needs at least one bit")
    P = Params(n, k, 0)
    b = _Builder()
    b.add(("x",), EVEN, (0, 0, 0, 0, 1), [("x",)])
    _clock(b, P, 0, n)
    g = b.finish(("x",))
    gg = GadgetGame(g, Circuit(n, ()), (0,) * n, 1, P, b.keys, b.ids, b.args, {}, (0, 0))
    gg.chi0 = kappa(gg, 0, K, 1)
    gg.sigma0 = materialize(gg, gg.chi0)
    return gg


def build_optstrat(C: Circuit, B, z: int, third: tuple[int, int] | None = None) -> GadgetGame:
    """Variant with a third clock whose top bit makes copy 1's gate ``z``
    indifferent once ``F^(2^n)(B)`` is stored there.

    ``third = (K2, m2)`` overrides the initial state of the third clock.
    """
    B = _check_input(C, B, z)
    b, P = _assemble(C, B, z, optstrat=True)
    g = b.finish(("x",))
    d = b.ids[("id", 1, z)]
    gg = GadgetGame(
        g, C, B, z, P, b.keys, b.ids, b.args, {}, (d, b.ids[("v", ("ie", 1, z))]),
        optstrat=True, repairs=list(REPAIRS) + list(OPT_REPAIRS),
    )
    if third is None:
        third = third_clock_start(P)
    gg.third_clock_start = third
    chi = predict(gg, B, 1, 0, 2)
    chi.update(kappa(gg, 2, third[0], third[1], bits=C.n + 1))
    relayed = chi.pop(("id", 1, z), None)
    if relayed is not None:
        chi[("id", 1, z)] = ("v", relayed)
    for t in b.out[d]:
        chi[t] = t[1]
    gg.chi0 = chi
    gg.sigma0 = materialize(gg, chi)
    return gg


def third_clock_start(P: Params) -> tuple[int, int]:
    """Initial (K2, m2) of the third clock so that its top bit flips in the
    middle of the window in which copy 1 stores F^(2^n)(B)."""
    n = P.n
    target = store_window(P)
    mid = (target[0] + target[1]) // 2
    # the third clock flips (its top bit is set) after running through every
    # remaining value below 2^n; search the start state with the right timing
    best = None
    for K2 in range(0, 2**n):
        Lk = P.length(K2, n + 1)
        for m2 in range(1, Lk + 1):
            t = 0
            t += Lk - m2 + 1
            for K in range(K2 + 1, 2**n):
                t += P.length(K, n + 1)
            # t = iteration at which the clock reaches kappa^{2^n}_1
            if best is None or abs(t - mid) < abs(best[0] - mid):
                best = (t, K2, m2)
    return best[1], best[2]


def schedule(P: Params, stop_K: int | None = None):
    """Yield (t, B-index, K, j, m) along the predicted run from
    chi^{B,1,0}_2; the B-index counts applications of F to the input of the
    computing copy."""
    t = 0
    K = 1
    bidx = 0
    m = 2
    top = (2**P.n - 1) if stop_K is None else stop_K
    while K < top:
        for j in (0, 1):
            dj = P.delay(j, K)
            while m <= dj - 1:
                yield t, bidx, K, j, m
                t += 1
                m += 1
            m = 1
            bidx += 1
        K += 1


def horizon(P: Params) -> int:
    """Number of iterations covered by the predicted run."""
    return sum(1 for _ in schedule(P))


def final_phase_end(P: Params) -> int:
    """First iteration after the phase in which copy 1 computes F^(2^n)(B)."""
    want = 2**P.n - 1
    end = None
    for t, bidx, K, j, m in schedule(P):
        if bidx == want:
            end = t + 1
    if end is None:
        raise BuildError(f"the predicted run does not reach F^(2^n) for n = {P.n}")
    return end


def store_window(P: Params) -> tuple[int, int]:
    """Iterations during which copy 1's input/output gates are predicted to
    hold F^(2^n)(B): from its store step to the end of the predicted run or
    the start of copy 1's next computation, whichever comes first."""
    want = 2**P.n - 1
    start = end = None
    for t, bidx, K, j, m in schedule(P):
        if j == 1 and bidx == want and m == P.dC + 4:
            start = t
        if j == 1 and bidx == want + 2 and m == 1:
            end = t
            break
    if start is None:
        raise BuildError("storage window not reached")
    return start, horizon(P) if end is None else end


# ---------------------------------------------------------------------------
# predicted strategies


def kappa(gg: GadgetGame, c: int, K: int, m: int, bits: int | None = None) -> dict:
    """Clock ``c`` at bit-string ``K`` and step ``m`` (1..length(K))."""
    P = gg.params
    bits = P.n if bits is None else bits
    Lc = P.clock_lane(bits)
    s, r = ("s", c), ("r", c)
    length = P.length(K, bits)
    out: dict[Key, Key] = {}
    out[("t", c, 0)] = s if m == 1 else r
    for l in range(1, Lc + 1):
        out[("t", c, l)] = s if m == 1 else (r if m <= l + 1 else ("t", c, l - 1))
    for i in range(1, bits + 1):
        if bit(K, i):
            out[("d", c, i)] = ("e", c, i)
        else:
            top = P.base + 2 * i
            if m == 1:
                out[("d", c, i)] = s
            elif m == 2:
                out[("d", c, i)] = r
            elif m == 3:
                out[("d", c, i)] = ("a", c, top)
            elif m <= top + 3:
                out[("d", c, i)] = ("a", c, m - 3)
            else:
                out[("d", c, i)] = ("e", c, i)
        # a bit cleared by the last increment keeps its f-edge for one step
        held = m == 1 and K > 0 and bit(K - 1, i)
        out[("g", c, i)] = ("f", c, i) if bit(K, i) or held else ("k", c, i)
        nb = nexbit(K, i, bits)
        out[("k", c, i)] = ("g", c, nb) if nb else ("x",)
    nb = nexbit(K, 0, bits)
    out[r] = ("g", c, nb) if nb else ("x",)
    out[s] = ("f", c, nb) if nb else ("x",)
    if length is not None and m == length:
        z = lsz(K, bits)
        out[("g", c, z)] = ("f", c, z)
        out[s] = ("f", c, z)
    return out


def _lane_step(m: int, l: int, s: Key, r: Key, prev: Key) -> Key:
    if m == 1:
        return s
    if l == 0 or m <= l + 1:
        return r
    return prev


def _not_d(m: int, L: int, s, r, e, a) -> Key:
    if m == 1:
        return s
    if m == 2:
        return r
    if m == 3:
        return a(L)
    if m <= L + 3:
        return a(m - 3)
    return e


def availability(C: Circuit, B: tuple) -> list:
    """First step at which each true index looks true to its readers
    (``None`` for false ones).  Stored inputs are visible from step 2, so
    gates fed by them through or-gates run ahead of their depth."""
    val = C.values(B)
    A: list = [None] * (C.size + 1)
    for q in range(1, C.n + 1):
        A[q] = 2 if val[q] else None
    for i in range(C.n + 1, C.size + 1):
        if not val[i]:
            continue
        g = C.gate(i)
        if g.kind == NOT:
            A[i] = C.depth[i] + 3
        else:
            A[i] = 1 + min(A[q] for q in g.inputs if val[q])
    return A


def _circuit_gates(gg: GadgetGame, j: int, B: tuple, m: int, out: dict, ornext: dict) -> None:
    C, P = gg.circuit, gg.params
    L = P.lane
    val = C.values(B)
    A = availability(C, B)
    s, r = ("s", j), ("r", j)
    never = 1 << 30
    for i in range(C.n + 1, C.size + 1):
        g = C.gate(i)
        D = C.depth[i]
        if g.kind == OR:
            o = ("or", j, i)
            live = [q for q in g.inputs if val[q] and A[q] < m]
            if m == 1:
                out[o] = s
            elif not live:
                out[o] = r
            else:
                targets = {_gate_output(C, j, q) for q in live}
                if len(targets) == 1:
                    out[o] = targets.pop()
                else:
                    # both inputs true: the better-valued one, resolved by the checker
                    ornext[o] = tuple(_gate_output(C, j, q) for q in g.inputs)
            continue
        q = g.in1
        # step at which t_l first points down the lane (t_D is wired)
        sw = [0] * (L + 1)
        for l in range(1, L + 1):
            if l < D:
                sw[l] = l + 2
            elif l == D:
                sw[l] = A[q] if val[q] else never
            else:
                sw[l] = A[q] + l - D if val[q] else never
        for l in range(0, L + 1):
            if l == D:
                continue
            key = ("nt", j, i, l)
            if m == 1:
                out[key] = s
            elif l == 0 or m < sw[l]:
                out[key] = r
            else:
                out[key] = ("nt", j, i, l - 1)
        d = ("nd", j, i)
        if m == 1:
            out[d] = s
        elif m == 2:
            out[d] = r
        elif m > D + 2 and not val[q]:
            out[d] = ("ne", j, i)
        elif m > L + 3:
            out[d] = ("ne", j, i)
        else:
            ready = [l for l in range(1, L + 1) if sw[l] <= m - 1]
            out[d] = ("na", j, i, max(ready) if ready else L)


def _io_lane(M: int, l: int, D: int, stored: int, dly: int) -> bool:
    """Has lane vertex ``t_l`` of an input/output gate left y by step ``M``?"""
    if l == 0 or M <= 2:
        return False
    if l < D or not stored:
        return M > l + 1
    # above the wire a stored 1 holds the lane until p turns to its relay
    return M >= dly + 1 + l - D


def _io_gates(gg: GadgetGame, c: int, X: tuple, M: int, Kc: int, out: dict, prev=None) -> None:
    """``prev = (stored, M_last, delay)`` describes the previous cycle and is
    needed at ``M = 1``, where the lanes still hold their old walk."""
    C, P = gg.circuit, gg.params
    L, D = P.lane, P.dC + 1
    y, z = ("y", c), ("z", c)
    dly = P.delay(c, Kc)
    for i in range(1, C.n + 1):
        stored = X[i - 1]
        for l in range(0, L + 1):
            if l == D:
                continue
            key = ("it", c, i, l)
            if M == 1:
                if l == 0:
                    out[key] = y
                elif prev is not None:
                    old, last, pdly = prev
                    walked = _io_lane(last, l, D, old[i - 1], pdly)
                    out[key] = ("it", c, i, l - 1) if walked else y
            elif M == 2:
                out[key] = z
            else:
                out[key] = ("it", c, i, l - 1) if _io_lane(M, l, D, stored, dly) else y
        if M > 1:
            if M > D + 2 and stored:
                out[("id", c, i)] = ("ie", c, i)
            elif M == 2:
                out[("id", c, i)] = z
            else:
                out[("id", c, i)] = _not_d(M, L, z, y, ("ie", c, i), lambda l: ("ia", c, i, l))
        out[("ip", c, i)] = ("ip1", c, i) if (M == 1 or M > dly) else _gate_output(C, c, C.output(i))
        out[("ih0", c, i)] = ("ih2", c, i) if (M == 1 or M >= dly + 1) else ("ih1", c, i)
    out[z] = ("s", c) if M == 1 else ("r", c)
    out[y] = ("r", 1 - c) if (M == 1 or M >= dly + 1) else ("r", c)


@dataclass
class Prediction:
    even: dict  # key -> key
    odd: dict  # key -> key
    ornext: dict  # or-gate key -> (input a, input b): the better one is expected


def predict_full(
    gg: GadgetGame, B, K: int, j: int, m: int, prev_stored=None
) -> Prediction:
    """chi^{B,K,j}_m and mu^{B,K,j}_m for ``1 <= m <= delay(j,K) - 1``.

    ``prev_stored`` is what copy ``j`` stored in its previous computation; at
    ``m = 1`` its lanes are only predicted when it is given.
    """
    P, C = gg.params, gg.circuit
    B = tuple(B)
    dj = P.delay(j, K)
    if dj is None or not 1 <= m <= dj - 1:
        raise ValueError(f"step {m} outside 1..delay-1 for (K={K}, j={j})")
    FB = _F(C, B)
    o = 1 - j
    Ko = OC(K, j)
    Mo = m + P.delay(o, Ko) - 1
    even: dict = {}
    odd: dict = {}
    ornext: dict = {}
    even.update(kappa(gg, j, K, m))
    even.update(kappa(gg, o, Ko, Mo))
    _circuit_gates(gg, j, B, m, even, ornext)
    prev = None
    if m == 1 and prev_stored is not None and K >= 1:
        Kp = K - 1
        # the idle walk runs one step past the last idle iteration
        last = P.delay(0, Kp) + P.delay(1, Kp) - 1 if j == 0 else P.delay(1, Kp) + P.delay(0, K) - 1
        prev = (tuple(prev_stored), last, P.delay(j, Kp))
    _io_gates(gg, j, FB, m, K, even, prev)
    _io_gates(gg, o, B, Mo, Ko, even)
    # best responses
    val = C.values(B)
    for i in range(C.n + 1, C.size + 1):
        g = C.gate(i)
        if g.kind == NOT:
            bad = m > C.depth[i] + 2 and not val[g.in1]
            odd[("ne", j, i)] = ("nh", j, i) if bad else ("nd", j, i)
    for i in range(1, C.n + 1):
        odd[("ie", o, i)] = ("ih0", o, i) if B[i - 1] else ("id", o, i)
        if m > 1:
            hit = m > P.dC + 3 and FB[i - 1]
            odd[("ie", j, i)] = ("ih0", j, i) if hit else ("id", j, i)
        odd[("iq0", j, i)] = ("ie", j, i) if m == 1 else ("iq1", j, i)
        odd[("iq0", o, i)] = ("ie", o, i)
    return Prediction(even, odd, ornext)


def _F(C: Circuit, B: tuple) -> tuple:
    """F(B) where C is the negated form computing the complement of F."""
    return tuple(1 - b for b in C.apply(B))


def predict(gg: GadgetGame, B, K: int, j: int, m: int, prev_stored=None) -> dict:
    return predict_full(gg, B, K, j, m, prev_stored).even


def predict_br(gg: GadgetGame, B, K: int, j: int, m: int, prev_stored=None) -> dict:
    return predict_full(gg, B, K, j, m, prev_stored).odd


def materialize(gg: GadgetGame, chi: dict, rng=None) -> dict:
    """Total Even strategy agreeing with the partial strategy ``chi``;
    other vertices take their lowest-id successor, or a random one."""
    g = gg.game
    sigma = {}
    for v in g.even_vertices:
        key = gg.keys[v]
        if key in chi:
            u = gg.ids[chi[key]]
            if u not in g.succ[v]:
                raise BuildError(f"predicted edge {key} -> {chi[key]} does not exist")
            sigma[v] = u
        elif rng is not None:
            sigma[v] = rng.choice(g.succ[v])
        else:
            sigma[v] = min(g.succ[v])
    return sigma


def random_start(gg: GadgetGame, seed: int) -> dict:
    """Start strategy agreeing with ``gg.chi0``, random elsewhere."""
    import random

    return materialize(gg, gg.chi0, random.Random(seed))


# ---------------------------------------------------------------------------
# binary or-gadget


def build_binary_or_gate(i: int, j: int, stub_priorities: dict | None = None) -> tuple[ParityGame, dict]:
    """The three-vertex binary or-gadget wired to stub successors.

    Stubs ``s``, ``r``, ``in1`` and ``in2`` lead to the sink through one
    vertex each, with priorities chosen by ``stub_priorities`` (defaults give
    ``in1`` the best valuation).  Returns the game and its key map.
    """
    V = 16
    stub = {"s": 4, "r": 6, "in1": 10, "in2": 8}
    if stub_priorities:
        stub.update(stub_priorities)
    keys = [("x",), ("o", j, i), ("o1", j, i), ("o2", j, i)] + [("stub", n) for n in stub]
    ids = {k: v for v, k in enumerate(keys)}
    pri = [1, pp(4, i, 0, j, 1, V), pp(4, i, 1, j, 1, V), pp(4, i, 2, j, 1, V)] + list(stub.values())
    succ = [
        [0],
        [ids[("stub", "s")], ids[("o1", j, i)]],
        [ids[("stub", "r")], ids[("o2", j, i)]],
        [ids[("stub", "in1")], ids[("stub", "in2")]],
    ] + [[0] for _ in stub]
    owner = [EVEN] * len(keys)
    names = [key_name(k) for k in keys]
    return ParityGame.from_lists(owner, pri, succ, names, 0), ids


def binary_extension(P: Params) -> dict:
    """Arithmetic of the fully binary variant: lanes grow by 2k and not-gate
    inputs move to t_{i, 2 d(i)}."""
    return {"clock_lane": P.lane + 2 * P.k, "not_input_position": lambda d: 2 * d}
