import itertools
import json
import random

import pytest

from allswitch.circuit import (
    NOT,
    Circuit,
    CircuitError,
    Not,
    Or,
    bitswitch_oracle,
    circuitvalue_oracle,
    constant,
    identity,
    increment,
    is_normal,
    negate,
    pad_depths,
    prepare,
    random_circuit,
    set_bit,
    validate,
)


def inputs(n):
    return list(itertools.product((0, 1), repeat=n))


def test_identity_is_valid_and_normal():
    c = identity(3)
    validate(c)
    assert all(c.apply(B) == B for B in inputs(3))


def test_forward_reference_rejected():
    with pytest.raises(CircuitError, match="gate 3"):
        validate(Circuit(2, (Not(4), Not(1), Not(3), Not(4))), normal=False)


def test_unequal_or_depths_not_normal():
    c = Circuit(1, (Not(1), Or(1, 2), Or(3, 3)))
    validate(c, normal=False)
    assert not is_normal(c)


def test_pad_keeps_normal_circuits():
    c = identity(2)
    assert pad_depths(c) is c


def test_pad_lifts_the_shallow_arm():
    # Or over depth 0 (input 1) and depth 2 (Not Not 1)
    c = Circuit(1, (Not(1), Not(2), Or(1, 3)))
    p = pad_depths(c)
    assert is_normal(p)
    dummies = [g for g in p.gates if g.kind != NOT and g.in1 == g.in2]
    assert len(dummies) >= 2
    assert all(p.apply(B) == c.apply(B) for B in inputs(1))


def test_padding_preserves_semantics():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(1, 3)
        c = random_circuit(rng, n, rng.randint(n, 8))
        p = pad_depths(c)
        assert is_normal(p)
        assert all(p.apply(B) == c.apply(B) for B in inputs(n))


def test_negate():
    one = constant(2, 1)
    assert all(negate(one).apply(B) == (0, 0) for B in inputs(2))
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 3)
        c = random_circuit(rng, n, rng.randint(n, 7))
        nc = negate(c)
        assert all(nc.apply(B) == tuple(1 - b for b in c.apply(B)) for B in inputs(n))
        assert all(negate(nc).apply(B)[-n:] == c.apply(B) for B in inputs(n))


def test_prepare_is_normal_complement():
    for c in (identity(2), set_bit(2, 1), increment(2), increment(3)):
        p = prepare(c)
        assert is_normal(p)
        assert all(p.apply(B) == tuple(1 - b for b in c.apply(B)) for B in inputs(c.n))


def test_iterate():
    c = increment(2)
    assert c.iterate((1, 0), 0) == (1, 0)
    assert identity(2).iterate((1, 0), 7) == (1, 0)
    assert c.iterate((0, 0), 3) == (1, 1)
    with pytest.raises(CircuitError):
        c.iterate((0, 0), -1)


def _as_int(B):
    return sum(b << i for i, b in enumerate(B))


def test_sample_circuits_truth_tables():
    for n in (2, 3):
        inc = increment(n)
        for B in inputs(n):
            assert _as_int(inc.apply(B)) == (_as_int(B) + 1) % 2**n
            for z in range(1, n + 1):
                out = set_bit(n, z).apply(B)
                assert out[z - 1] == 1
                assert all(out[i] == B[i] for i in range(n) if i != z - 1)
    assert all(constant(2, 0).apply(B) == (0, 0) for B in inputs(2))


def _orbit(c, B):
    out = [tuple(B)]
    for _ in range(2**c.n):
        out.append(c.apply(out[-1]))
    return out


def test_oracles():
    one = constant(2, 1)
    assert all(bitswitch_oracle(one, B, z) for B in inputs(2) for z in (1, 2))
    assert not bitswitch_oracle(identity(2), (0, 0), 1)
    assert not circuitvalue_oracle(identity(2), (0, 0), 1)
    assert circuitvalue_oracle(identity(2), (1, 0), 1)
    inc = increment(2)
    for B in inputs(2):
        for z in (1, 2):
            orb = _orbit(inc, B)
            assert bitswitch_oracle(inc, B, z) == any(orb[i][z - 1] for i in range(2, 5, 2))
            assert circuitvalue_oracle(inc, B, z) == bool(orb[4][z - 1])


def test_json_round_trip_and_errors():
    c = increment(2)
    assert Circuit.from_json(json.dumps(c.to_json())) == c
    with pytest.raises(CircuitError, match="gate 1"):
        Circuit.from_json({"n": 1, "gates": [{"kind": "not", "in1": 1}, {"kind": "xor", "in1": 1}]})
    with pytest.raises(CircuitError, match="gate 0"):
        Circuit.from_json({"n": 1, "gates": [{"kind": "or", "in1": 1}]})
