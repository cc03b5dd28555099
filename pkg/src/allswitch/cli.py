"""Command-line front end.

Every subcommand prints one JSON document on stdout; diagnostics go to
stderr.  Exit codes: 0 success or "yes", 1 "no", 2 error (including a run
that ran out of budget before it could answer).

Circuits are given either as a JSON file (``{"n": .., "gates": [..]}``) or as
a builtin: ``identity:N``, ``increment:N``, ``set_bit:N:Z``, ``constant:N:BIT``.
Games are read from PGSolver text or from JSON (detected by a leading ``{``).
Files written without an explicit ``--out`` land in ``$ALLSWITCH_OUT``
(default: the current directory).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import auso, circuit as circ, construction as cons, deciders, reductions
from .game import GameError, ParityGame, from_pgsolver, si_run, to_pgsolver, winning_sets

log = logging.getLogger("allswitch")

OUT_ENV = "ALLSWITCH_OUT"
EXIT_OK, EXIT_NO, EXIT_ERR = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input parsing


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    return p.read_text()


def load_circuit(spec: str) -> circ.Circuit:
    builtins = {"identity": circ.identity, "increment": circ.increment, "set_bit": circ.set_bit, "constant": circ.constant}
    head, *args = spec.split(":")
    if head in builtins and not Path(spec).is_file():
        try:
            return builtins[head](*map(int, args))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad builtin circuit {spec!r}: {exc}") from None
    return circ.Circuit.from_json(_read(spec))


def load_game(path: str) -> ParityGame:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return ParityGame.from_dict(json.loads(text))
    return from_pgsolver(text)


def game_text(g: ParityGame, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(g.to_dict(), sort_keys=True) + "\n"
    return to_pgsolver(g)


def _vertex(g: ParityGame, token: str) -> int:
    if g.names and token in g.names:
        return g.names.index(token)
    try:
        v = int(token)
    except ValueError:
        raise UsageError(f"unknown vertex {token!r}") from None
    if v not in g.vertices:
        raise UsageError(f"vertex {v} out of range")
    return v


def parse_edge(g: ParityGame, spec: str) -> tuple[int, int]:
    parts = spec.split(",")
    if len(parts) != 2:
        raise UsageError(f"edge must be 'v,u', got {spec!r}")
    v, u = (_vertex(g, s.strip()) for s in parts)
    if u not in g.succ[v]:
        raise UsageError(f"{spec!r} is not an edge of the game")
    return v, u


def load_strategy(g: ParityGame, path: str | None) -> dict:
    if path is None:
        return g.default_strategy()
    sigma = {}
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"{path}:{lineno}: expected 'vertex successor'")
        sigma[_vertex(g, parts[0])] = _vertex(g, parts[1])
    full = g.default_strategy()
    full.update(sigma)
    g.check_strategy(full, 0)
    return full


def parse_bits(spec: str, n: int) -> tuple[int, ...]:
    if len(spec) != n or set(spec) - {"0", "1"}:
        raise UsageError(f"input must be {n} characters of 0/1 (bit 1 first), got {spec!r}")
    return tuple(int(c) for c in spec)


def out_path(args, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUT_ENV, ".")) / default_name


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _circuit_args(args):
    F = load_circuit(args.circuit)
    B = parse_bits(args.input, F.n)
    if not 1 <= args.z <= F.n:
        raise UsageError(f"--z must lie in 1..{F.n}")
    return F, B


def _built(args, optstrat: bool) -> cons.GadgetGame:
    F, B = _circuit_args(args)
    C = circ.prepare(F)
    gg = cons.build_optstrat(C, B, args.z) if optstrat else cons.build(C, B, args.z)
    if args.seed is not None:
        gg.sigma0 = cons.random_start(gg, args.seed)
    return gg


def _strategy_text(g: ParityGame, sigma: dict) -> str:
    return "".join(f"{g.name(v)} {g.name(u)}\n" for v, u in sorted(sigma.items()))


def _write_trace(args, g: ParityGame, trace) -> None:
    if args.trace:
        _write(Path(args.trace), trace.to_jsonl(g.names))


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args, optstrat: bool = False) -> int:
    gg = _built(args, optstrat)
    g = gg.game
    stem = "optstrat" if optstrat else "bitswitch"
    ext = "json" if args.format == "json" else "gm"
    gpath = out_path(args, f"{stem}.{ext}")
    spath = gpath.with_suffix(".start")
    _write(gpath, game_text(g, args.format))
    _write(spath, _strategy_text(g, gg.sigma0))
    if args.manifest:
        _write(Path(args.manifest), gg.manifest_json())
    v, u = gg.watched
    emit({
        "game": str(gpath),
        "start": str(spath),
        "vertices": len(g),
        "edges": sum(len(s) for s in g.succ),
        "watched": [g.name(v), g.name(u)],
        "budget": deciders.default_budget(gg),
    })
    return EXIT_OK


def cmd_solve(args) -> int:
    g = load_game(args.game)
    res = si_run(g, load_strategy(g, args.start), args.budget)
    _write_trace(args, g, res.trace)
    if not res.optimal:
        raise UsageError(f"budget of {args.budget} iterations exhausted before the optimum")
    w0, w1 = winning_sets(g, res.final)
    emit({
        "even": sorted(g.name(v) for v in w0) if g.names else sorted(w0),
        "odd": sorted(g.name(v) for v in w1) if g.names else sorted(w1),
        "iterations": res.iterations,
        "strategy": {g.name(v): g.name(u) for v, u in sorted(res.final.items())},
    })
    return EXIT_OK


def _decide(args, problem: str) -> int:
    if args.circuit:
        gg = _built(args, optstrat=problem == "optimal-strategy")
        g, sigma0, e = gg.game, gg.sigma0, gg.watched
        budget = args.budget
        if budget is None and problem == "edge-switch":
            budget = deciders.default_budget(gg)
    else:
        if not (args.game and args.edge):
            raise UsageError("give --circuit/--input/--z, or a game file with --edge")
        g = load_game(args.game)
        sigma0, e = load_strategy(g, args.start), parse_edge(g, args.edge)
        budget = args.budget
    if problem == "edge-switch":
        verdict = deciders.edge_switch(g, sigma0, e, budget)
    else:
        verdict = deciders.optimal_strategy_uses(g, sigma0, e, budget)
    if args.trace:
        _write_trace(args, g, si_run(g, sigma0, budget, check_monotone=False).trace)
    out = json.loads(verdict.to_json())
    out["edge"] = [g.name(e[0]), g.name(e[1])]
    emit(out)
    if verdict.answer == deciders.UNKNOWN:
        log.error("run did not reach the optimum within %s iterations", budget)
        return EXIT_ERR
    return EXIT_OK if verdict.answer == deciders.YES else EXIT_NO


def cmd_check(args, what: str) -> int:
    gg = _built(args, optstrat=False)
    if what == "trajectory":
        rep = deciders.check_trajectory(gg, horizon=args.budget)
    else:
        rep = deciders.check_invariants(gg, horizon=args.budget)
    sys.stdout.write(rep.to_json() + "\n")
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_reduce(args) -> int:
    g = load_game(args.game)
    mpg = reductions.to_mean_payoff(g)
    path = out_path(args, "reduced.mpg")
    _write(path, mpg.to_text(args.max_digits))
    exps = [p for p in mpg.exponent if p is not None]
    emit({"mpg": str(path), "vertices": len(g), "base": -mpg.m, "max_exponent": max(exps, default=0)})
    return EXIT_OK


def cmd_cube(args) -> int:
    g = load_game(args.game)
    c, bg = auso.to_cube(g)
    uso = auso.validate_uso(c)
    acyc = auso.validate_acyclic(c) if uso.ok else auso.CubeVerdict(False, "not a USO")
    out = {"dimensions": c.d, "choice_vertices": [g.name(v) for v in bg.dims], "uso": uso.ok, "acyclic": acyc.ok}
    if not uso.ok:
        out["reason"] = uso.reason
    elif not acyc.ok:
        out["reason"] = acyc.reason
    else:
        start = int(args.start_vertex, 2) if args.start_vertex else 0
        out["bottom_antipodal"] = [format(x, f"0{c.d}b")[::-1] for x in auso.bottom_antipodal(c, start)]
        out["matches_si"] = auso.si_correspondence(c, bg, start).ok
    if args.dump:
        _write(Path(args.dump), auso.dump(c))
    emit(out)
    return EXIT_OK if uso.ok and acyc.ok else EXIT_NO


def cmd_oracle(args, which: str) -> int:
    F, B = _circuit_args(args)
    fn = circ.bitswitch_oracle if which == "bitswitch" else circ.circuitvalue_oracle
    ans = fn(F, B, args.z)
    emit({"problem": which, "answer": "yes" if ans else "no", "orbit": ["".join(map(str, F.iterate(B, t))) for t in range(2**F.n + 1)]})
    return EXIT_OK if ans else EXIT_NO


def cmd_export(args) -> int:
    g = load_game(args.game)
    text = game_text(g, args.format)
    if args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    path = out_path(args, "game." + ("json" if args.format == "json" else "gm"))
    _write(path, text)
    emit({"game": str(path), "format": args.format, "vertices": len(g)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="allswitch", description="All-switches strategy improvement toolkit.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def circuit_opts(sp, required=True):
        sp.add_argument("--circuit", required=required, help="JSON file or builtin such as increment:2")
        sp.add_argument("--input", required=required, help="initial bits, bit 1 first, e.g. 01")
        sp.add_argument("--z", type=int, required=required, help="watched output bit")
        sp.add_argument("--seed", type=int, help="random fill of unconstrained start choices")

    def common(sp):
        sp.add_argument("--budget", type=_positive, help="iteration budget")
        sp.add_argument("--trace", help="write the switch trace (JSON lines) here")

    for name, help_ in (("build", "BitSwitch game for (F, B, z)"), ("build-optstrat", "CircuitValue game for (F, B, z)")):
        sp = sub.add_parser(name, help=help_)
        circuit_opts(sp)
        sp.add_argument("--format", choices=("pgsolver", "json"), default="pgsolver")
        sp.add_argument("--out", help="game file; the start strategy goes next to it")
        sp.add_argument("--manifest", help="write vertex keys and priorities here")

    sp = sub.add_parser("solve", help="winning sets by strategy improvement")
    sp.add_argument("game")
    sp.add_argument("--start", help="start strategy file ('vertex successor' lines)")
    common(sp)

    for name in ("edge-switch", "optimal-strategy"):
        sp = sub.add_parser(name, help=f"decide {name} on a built or given game")
        sp.add_argument("game", nargs="?")
        sp.add_argument("--edge", help="v,u by id or name")
        sp.add_argument("--start")
        circuit_opts(sp, required=False)
        common(sp)

    for name in ("check-trajectory", "check-lemmas"):
        sp = sub.add_parser(name, help="replay a built game against its predicted strategies")
        circuit_opts(sp)
        sp.add_argument("--budget", type=_positive, help="iterations to check (default: the schedule)")

    sp = sub.add_parser("reduce-mpg", help="mean-payoff game of a one-sink game")
    sp.add_argument("game")
    sp.add_argument("--out")
    sp.add_argument("--max-digits", type=_positive, default=10_000)

    sp = sub.add_parser("cube", help="cube orientation of a binary one-sink game")
    sp.add_argument("game")
    sp.add_argument("--start-vertex", help="cube vertex as bits, dimension 0 first")
    sp.add_argument("--dump", help="write the orientation table here")

    for name in ("oracle-bitswitch", "oracle-circuitvalue"):
        sp = sub.add_parser(name, help="answer by direct circuit iteration")
        circuit_opts(sp)

    sp = sub.add_parser("export", help="convert a game between formats")
    sp.add_argument("game")
    sp.add_argument("--format", choices=("pgsolver", "json"), default="json")
    sp.add_argument("--out", help="target file, or - for stdout")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_OK if exc.code == 0 else EXIT_ERR
    logging.basicConfig(
        stream=sys.stderr, format="%(levelname)s: %(message)s",
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
    )
    handlers = {
        "build": lambda: cmd_build(args),
        "build-optstrat": lambda: cmd_build(args, optstrat=True),
        "solve": lambda: cmd_solve(args),
        "edge-switch": lambda: _decide(args, "edge-switch"),
        "optimal-strategy": lambda: _decide(args, "optimal-strategy"),
        "check-trajectory": lambda: cmd_check(args, "trajectory"),
        "check-lemmas": lambda: cmd_check(args, "lemmas"),
        "reduce-mpg": lambda: cmd_reduce(args),
        "cube": lambda: cmd_cube(args),
        "oracle-bitswitch": lambda: cmd_oracle(args, "bitswitch"),
        "oracle-circuitvalue": lambda: cmd_oracle(args, "circuitvalue"),
        "export": lambda: cmd_export(args),
    }
    try:
        return handlers[args.command]()
    except (UsageError, GameError, circ.CircuitError, cons.BuildError, auso.CubeError, ValueError, json.JSONDecodeError) as exc:
        print(f"allswitch {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
