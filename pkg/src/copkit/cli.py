"""Command line entry point.

stdout carries only results; diagnostics go to stderr. Exit codes:
0 success, 1 usage error, 2 bad input or file, 3 an ``unknown`` or
``exhausted`` verdict.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import distance, dsl, predict, qim, sim, tm

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def data_path(relative: str) -> Path:
    return Path(str(resources.files("copkit") / "data" / relative))


def resolve(path: str) -> Path:
    """A user path, falling back to the bundled data directory."""
    p = Path(path)
    if p.exists():
        return p
    bundled = data_path(path)
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no such file: {path}")


def read_text(path: str) -> str:
    return resolve(path).read_text(encoding="utf-8")


def read_words(path: str) -> list[str]:
    """One word per line; a trailing newline is optional."""
    text = read_text(path)
    if text.endswith("\n"):
        text = text[:-1]
    return [w.rstrip("\r") for w in text.split("\n")] if text else []


def read_numbers(path: str) -> list[float]:
    return [float(tok) for tok in read_text(path).split()]


def _seed_word(args) -> str:
    if args.seed_file is not None:
        words = read_words(args.seed_file)
        if len(words) != 1:
            raise ValueError("seed file must contain exactly one word")
        return words[0]
    return args.seed_word


def _oracle(args) -> distance.DistanceOracle:
    if args.oracle is not None:
        return distance.load_table(resolve(args.oracle))
    return distance.NcdOracle(distance.get_compressor(args.compressor))


def parse_int_list(text: str) -> list[int]:
    """``1,2,5`` or an inclusive range ``1..10`` (mixable: ``0,3..5``)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty integer list {text!r}")
    return out


def parse_motion(text: str) -> sim.Motion:
    name, *params = text.split(":")
    if name == "random_walk" and not params:
        return sim.RandomWalk()
    if name == "smooth_bounce":
        return sim.SmoothBounce(*(int(v) for v in params)) if params else sim.SmoothBounce()
    raise ValueError(f"unknown motion {text!r} (random_walk | smooth_bounce[:vx:vy])")


def parse_strategy(text: str) -> sim.Strategy:
    """``reactive``, ``simple_past``, ``ar:ORDER[:WINDOW]``, ``kalman:Q:R`` or ``program:FILE``."""
    if text.startswith("program:"):
        return dsl.bind_agent(dsl.parse_dsl(read_text(text[len("program:"):])))
    name, *params = text.split(":")
    if name == "reactive" and not params:
        return sim.Reactive()
    if name == "simple_past" and not params:
        pred = predict.SimplePast()
    elif name == "ar":
        pred = predict.AR(*(int(v) for v in params))
    elif name == "kalman" and len(params) == 2:
        pred = predict.Kalman(*(float(v) for v in params))
    else:
        raise ValueError(f"unknown strategy {text!r}")
    return sim.Intuitive(predict.Schedule.always(pred))


def _write(text: str) -> None:
    sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------


def cmd_tm_run(args) -> int:
    spec = tm.load_tm(resolve(args.machine))
    out = tm.run_tm(spec, args.word, args.budget)
    _write(f"{out.verdict.value}\t{out.steps_used}\n")
    return EXIT_UNKNOWN if out.verdict is tm.Verdict.BUDGET_EXHAUSTED else EXIT_OK


def cmd_enum(args) -> int:
    words = tm.enumerate_words(list(args.alphabet), args.start, args.count)
    _write("".join(w + "\n" for w in words))
    return EXIT_OK


def cmd_ncd(args) -> int:
    a = resolve(args.file_a).read_bytes()
    b = resolve(args.file_b).read_bytes()
    _write(f"{distance.ncd(distance.get_compressor(args.compressor), a, b):.6f}\n")
    return EXIT_OK


def cmd_selfsim(args) -> int:
    config = qim.QimConfig(tm.load_tm(resolve(args.machine)), args.p, _oracle(args), args.budget)
    trace = qim.self_similar_run(config, _seed_word(args), read_words(args.inputs))
    _write(qim.format_trace(trace))
    return EXIT_OK


def _decision_exit(decision: qim.Decision) -> int:
    _write(decision.value + "\n")
    return EXIT_UNKNOWN if decision is qim.Decision.UNKNOWN else EXIT_OK


def cmd_qil(args) -> int:
    instance = qim.QilInstance(tuple(read_words(args.chain)), args.query, tm.load_tm(resolve(args.machine)), args.p)
    return _decision_exit(qim.qil_check(instance, _oracle(args), args.budget))


def cmd_sw(args) -> int:
    decider = tm.load_tm(resolve(args.machine))
    ok = qim.sw_decide(decider, args.p, _oracle(args), args.x, args.y, args.budget)
    _write(("yes" if ok else "no") + "\n")
    return EXIT_OK


def cmd_sl(args) -> int:
    membership = None
    if args.members is not None:
        source = iter(read_words(args.members))
    else:
        spec = tm.load_tm(resolve(args.machine))
        if args.mode == "dovetail":
            source = qim.dovetail(spec)
        else:
            config = qim.QimConfig(spec, 1.0, _oracle(args), args.budget)
            source = qim.canonical(sorted(spec.input_alphabet))
            membership = config.machine_decision
    result = qim.sl_search(source, membership, args.p, _oracle(args), args.y, args.search_budget)
    if result.found:
        _write(f"found\t{result.witness}\t{result.index}\n")
        return EXIT_OK
    _write("exhausted\n")
    return EXIT_UNKNOWN


GAME_HEADER = "seed,delay_p,delay_q,points_p,points_q"


def _game_rows(configs, trace_path) -> str:
    lines = [GAME_HEADER]
    for config in configs:
        res = sim.run_game(config, trace=trace_path is not None)
        lines.append(f"{config.seed},{config.delay_p},{config.delay_q},{res.points_p},{res.points_q}")
        if trace_path is not None:
            Path(trace_path).write_text(res.trace.to_csv(), encoding="utf-8")
    return "\n".join(lines) + "\n"


def _base_config(args) -> sim.GameConfig:
    return sim.GameConfig(
        lifespan=args.lifespan,
        motion=parse_motion(args.motion),
        strategy_p=parse_strategy(args.strategy_p or args.strategy),
        strategy_q=parse_strategy(args.strategy_q or args.strategy),
    )


def cmd_game(args) -> int:
    delay_p = args.delay_p if args.delay_p is not None else args.delay
    delay_q = args.delay_q if args.delay_q is not None else args.delay
    config = replace(_base_config(args), delay_p=delay_p, delay_q=delay_q, seed=args.seed)
    _write(_game_rows([config], args.trace))
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = sim.sweep(_base_config(args), parse_int_list(args.delays), parse_int_list(args.seeds))
    _write(sim.sweep_csv(rows))
    return EXIT_OK


def cmd_dsl_run(args) -> int:
    program = dsl.parse_dsl(read_text(args.program))
    base = sim.GameConfig(
        lifespan=args.lifespan,
        delay_p=args.delay,
        delay_q=args.delay,
        motion=parse_motion(args.motion),
        strategy_q=parse_strategy(args.strategy_q),
        seed=args.seed,
    )
    res = dsl.run_dsl_game(program, base, trace=args.trace is not None)
    if args.trace is not None:
        Path(args.trace).write_text(res.trace.to_csv(), encoding="utf-8")
    _write(GAME_HEADER + "\n" + f"{args.seed},{args.delay},{args.delay},{res.points_p},{res.points_q}\n")
    return EXIT_OK


def cmd_cis(args) -> int:
    bits = predict.cis(read_numbers(args.predicted), read_numbers(args.real), tol=args.tol)
    _write("".join(map(str, bits)) + "\n")
    if len(bits) >= 64:
        _write(predict.randomness_proxy(bits, threshold=args.threshold).format() + "\n")
    else:
        print(f"note: {len(bits)} bits is too short for the randomness proxy", file=sys.stderr)
    return EXIT_OK


def cmd_randproxy(args) -> int:
    text = "".join(read_text(args.bits).split())
    if set(text) - {"0", "1"}:
        raise ValueError("bits file must contain only 0 and 1")
    report = predict.randomness_proxy(
        [int(c) for c in text], distance.get_compressor(args.compressor), args.threshold
    )
    _write(report.format() + "\n")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def _add_distance_args(p, required_p: bool = True) -> None:
    p.add_argument("--p", type=float, required=required_p, help="similarity threshold (strict)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--oracle", help="distance table (TSV)")
    src.add_argument("--compressor", default="bz2", choices=sorted(distance.COMPRESSORS))


def _add_game_args(p) -> None:
    p.add_argument("--lifespan", type=int, default=100_000)
    p.add_argument("--motion", default="random_walk")
    p.add_argument("--strategy", default="reactive", help="strategy for both players")
    p.add_argument("--strategy-p")
    p.add_argument("--strategy-q")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="copkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tm-run", help="run a Turing machine on a word")
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=cmd_tm_run)

    p = sub.add_parser("enum", help="canonical word enumeration")
    p.add_argument("--alphabet", required=True, help="symbols in order, e.g. 01")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("ncd", help="normalized compression distance of two files")
    p.add_argument("--file-a", required=True)
    p.add_argument("--file-b", required=True)
    p.add_argument("--compressor", default="bz2", choices=sorted(distance.COMPRESSORS))
    p.set_defaults(func=cmd_ncd)

    p = sub.add_parser("selfsim", help="grow a self-similar set and print its trace")
    p.add_argument("--machine", required=True)
    seed = p.add_mutually_exclusive_group(required=True)
    seed.add_argument("--seed-word")
    seed.add_argument("--seed-file")
    p.add_argument("--inputs", required=True, help="word list file")
    p.add_argument("--budget", type=int, default=1_000_000)
    _add_distance_args(p)
    p.set_defaults(func=cmd_selfsim)

    p = sub.add_parser("qil", help="check an acceptance chain")
    p.add_argument("--machine", required=True)
    p.add_argument("--chain", required=True, help="word list file")
    p.add_argument("--query", required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    _add_distance_args(p)
    p.set_defaults(func=cmd_qil)

    p = sub.add_parser("sw", help="decide a similar-words pair")
    p.add_argument("--machine", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    _add_distance_args(p)
    p.set_defaults(func=cmd_sw)

    p = sub.add_parser("sl", help="bounded search for a similar member")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--machine")
    src.add_argument("--members", help="word list file enumerating the language")
    p.add_argument("--mode", choices=("canonical", "dovetail"), default="canonical")
    p.add_argument("--y", required=True)
    p.add_argument("--search-budget", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000, help="per-word machine budget (canonical mode)")
    _add_distance_args(p)
    p.set_defaults(func=cmd_sl)

    p = sub.add_parser("game", help="play one game")
    _add_game_args(p)
    p.add_argument("--delay", type=int, default=0)
    p.add_argument("--delay-p", type=int)
    p.add_argument("--delay-q", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write per-tick CSV here")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("sweep", help="mean score per perception delay")
    _add_game_args(p)
    p.add_argument("--delays", required=True, help="e.g. 0,1,2,5,25,50")
    p.add_argument("--seeds", required=True, help="e.g. 1..10")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cis", help="indicator bits of predicted vs real values")
    p.add_argument("--predicted", required=True)
    p.add_argument("--real", required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--threshold", type=float, default=0.95)
    p.set_defaults(func=cmd_cis)

    p = sub.add_parser("randproxy", help="compression-based randomness proxy for a bit file")
    p.add_argument("--bits", required=True)
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--compressor", default="bz2", choices=sorted(distance.COMPRESSORS))
    p.set_defaults(func=cmd_randproxy)

    p = sub.add_parser("dsl-run", help="play a game with player P driven by a program")
    p.add_argument("--program", required=True)
    p.add_argument("--delay", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--motion", default="random_walk")
    p.add_argument("--lifespan", type=int, default=100_000)
    p.add_argument("--strategy-q", default="reactive")
    p.add_argument("--trace")
    p.set_defaults(func=cmd_dsl_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OSError, ValueError, TypeError, qim.BudgetExhaustedError, qim.DeciderContractError) as exc:
        print(f"copkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
