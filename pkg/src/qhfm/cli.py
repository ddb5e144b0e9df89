"""Command-line front end: ``qhfm <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .bench import format_bench, run_bench
from .hashing import (
    DEFAULT_ALPHA,
    DEFAULT_L,
    DEFAULT_THETA0,
    DEFAULT_THETA1,
    INSTANCES,
    hex_encode,
    instance,
    qhfm_hash,
)
from .statlab import (
    avalanche_from_digests,
    collision_from_digests,
    dumps,
    generate_corpus,
    hash_corpus,
    run_battery,
    sensitivity_demo,
    summary_table,
    uniformity_from_digests,
    write_battery,
)
from .statlab.corpus import SplitMix64
from .statlab.report import SCHEMA_VERSION, params_dict
from .walk import InvalidParams, WalkParams

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VERIFY = 4

DEFAULT_INSTANCE = 296
DEFAULT_DRAWS = 10000


class UsageError(Exception):
    pass


class CorpusError(Exception):
    pass


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _default_seed() -> int:
    env = os.environ.get("QHFM_SEED")
    if env is None:
        return 1
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"QHFM_SEED is not a valid 64-bit integer: {env!r}") from None


def _add_params(p: argparse.ArgumentParser, multi: bool = False) -> None:
    group = p.add_argument_group("hash parameters")
    if multi:
        group.add_argument(
            "--instance",
            type=int,
            action="append",
            help=f"output length of a published instance, repeatable ({', '.join(map(str, INSTANCES))})",
        )
    else:
        group.add_argument(
            "--instance",
            type=int,
            help=f"output length of a published instance ({', '.join(map(str, INSTANCES))})",
        )
    group.add_argument("--n", type=int, help="custom cycle size (odd)")
    group.add_argument("--m", type=int, help="custom bits per node")
    group.add_argument("--l", type=int, default=None, help=f"decimal scale exponent (default {DEFAULT_L})")
    group.add_argument("--theta0", type=float, default=None)
    group.add_argument("--theta1", type=float, default=None)
    group.add_argument("--alpha", type=float, default=None)


def _add_run(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, default=DEFAULT_DRAWS, help="number of draws")
    p.add_argument("--seed", type=_seed, default=None, help="64-bit corpus seed (env QHFM_SEED)")
    p.add_argument("--corpus", type=Path, help="newline-delimited text file used as message source")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)


def _custom(args) -> WalkParams | None:
    fields = (args.n, args.m, args.l, args.theta0, args.theta1, args.alpha)
    if all(v is None for v in fields):
        return None
    if args.n is None or args.m is None:
        raise UsageError("custom parameters need at least --n and --m")
    return WalkParams(
        args.n,
        args.m,
        DEFAULT_L if args.l is None else args.l,
        DEFAULT_THETA0 if args.theta0 is None else args.theta0,
        DEFAULT_THETA1 if args.theta1 is None else args.theta1,
        DEFAULT_ALPHA if args.alpha is None else args.alpha,
    )


def resolve_params(args) -> list[WalkParams]:
    custom = _custom(args)
    chosen = args.instance
    if isinstance(chosen, int):
        chosen = [chosen]
    if custom is not None:
        if chosen:
            raise UsageError("give either --instance or custom parameters, not both")
        return [custom]
    try:
        return [instance(L) for L in (chosen or [DEFAULT_INSTANCE])]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _single(args) -> WalkParams:
    params = resolve_params(args)
    if len(params) != 1:
        raise UsageError("this command takes a single instance")
    return params[0]


def _corpus(args):
    if args.N < 1:
        raise UsageError(f"--N must be at least 1, got {args.N}")
    seed = _default_seed() if args.seed is None else args.seed
    if args.corpus is not None:
        try:
            corpus = generate_corpus(args.N, seed, source="file", path=args.corpus)
        except (OSError, UnicodeDecodeError, ValueError) as exc:
            raise CorpusError(f"cannot use corpus {os.fspath(args.corpus)!r}: {exc}") from None
    else:
        corpus = generate_corpus(args.N, seed)
    meta = {"seed": seed, "source": "file" if args.corpus else "prng"}
    if args.corpus is not None:
        meta["corpus"] = os.fspath(args.corpus)
    return corpus, meta


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_hash(args) -> int:
    params = _single(args)
    if args.input is None or args.input == "-":
        data = sys.stdin.buffer.read()
    else:
        data = Path(args.input).read_bytes()
    digest = qhfm_hash(data, params)
    if args.format == "json":
        text = dumps({"schema_version": SCHEMA_VERSION, "params": params_dict(params), "digest": hex_encode(digest)})
    else:
        text = hex_encode(digest) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    params = _single(args)
    seed = _default_seed() if args.seed is None else args.seed
    result = sensitivity_demo(params, seed)
    if args.format == "json":
        _emit(dumps(result), args.out)
    else:
        lines = [f"{c['condition']:<9}{c['digest']}  changed={len(c['changed_positions'])}" for c in result["conditions"]]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _single_test(args, which: str) -> int:
    params = _single(args)
    if which == "avalanche" and args.N < 2:
        raise UsageError("avalanche needs --N >= 2")
    corpus, meta = _corpus(args)
    draws = hash_corpus(corpus, params, args.workers)
    report = {
        "avalanche": avalanche_from_digests,
        "uniformity": uniformity_from_digests,
        "collision": collision_from_digests,
    }[which](draws)
    data = {
        "schema_version": SCHEMA_VERSION,
        "params": params_dict(params),
        "meta": dict(meta, N=args.N),
        which: report.to_dict(),
    }
    if args.format == "csv":
        flat = {k: v for k, v in report.to_dict().items() if not isinstance(v, (list, dict))}
        text = "indicator,value\n" + "".join(f"{k},{v}\n" for k, v in flat.items())
    else:
        text = dumps(data)
    _emit(text, args.out)
    return EXIT_OK


def cmd_battery(args) -> int:
    params_list = resolve_params(args)
    if args.N < 2:
        raise UsageError("battery needs --N >= 2")
    corpus, meta = _corpus(args)
    out_dir = args.out or Path("qhfm-reports")
    reports = []
    for params in params_list:
        report = run_battery(corpus, params, args.workers, meta)
        reports.append(report)
        for path in write_battery(report, out_dir, args.format):
            print(f"wrote {path}", file=sys.stderr)
    print(summary_table(reports))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    sizes = args.sizes or [3, 5, 7]
    too_big = [n for n in sizes if n > oracle.MAX_ORACLE_N]
    if too_big:
        raise UsageError(
            f"dense oracle builds (8n)x(8n) matrices and is limited to n <= {oracle.MAX_ORACLE_N}; got {too_big}"
        )
    seed = _default_seed() if args.seed is None else args.seed
    ok = True
    results = []
    for n in sizes:
        params = WalkParams(
            n,
            8,
            DEFAULT_L,
            DEFAULT_THETA0 if args.theta0 is None else args.theta0,
            DEFAULT_THETA1 if args.theta1 is None else args.theta1,
            DEFAULT_ALPHA if args.alpha is None else args.alpha,
        )
        rng = SplitMix64(seed + n)
        messages = [rng.bits(args.bits) for _ in range(args.messages)]
        coin_table = None
        if args.corrupt_coin:
            coin_table = np.array(
                [list(oracle.coin_matrix(params.theta0).ravel()), list(oracle.coin_matrix(params.theta1).ravel())]
            )
            coin_table[0, 3] = -coin_table[0, 3]
        report = oracle.check_equivalence(params, messages, coin_table=coin_table)
        results.append(report.to_dict())
        ok &= report.passed
        status = "PASS" if report.passed else "FAIL"
        line = (
            f"{status} n={n} messages={report.messages} "
            f"max_orthogonality_error={report.max_orthogonality_error:.3e} "
            f"max_amplitude_deviation={report.max_amplitude_deviation:.3e}"
        )
        if not report.passed:
            w = report.worst
            line += f" worst at message {w['message_index']} x={w['x']} j={w['j']}"
        print(line)
    if args.out is not None:
        args.out.write_text(dumps({"schema_version": SCHEMA_VERSION, "results": results}), encoding="utf-8")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    lengths = tuple(2**k for k in range(args.min_exp, args.max_exp + 1))
    result = run_bench(
        lengths=lengths,
        sizes=tuple(args.sizes),
        fixed_n=args.fixed_n,
        fixed_length=args.fixed_length,
        repeats=args.repeats,
    )
    if args.format == "json":
        _emit(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out)
    else:
        _emit(format_bench(result) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhfm", description="Quantum-walk-with-memory hash and its test battery")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="hash a file or stdin")
    p.add_argument("input", nargs="?", help="input file ('-' or omitted for stdin)")
    _add_params(p)
    p.add_argument("--format", choices=("hex", "json"), default="hex")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("sensitivity", help="digests of a message and its flip/insert/delete variants")
    _add_params(p)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--format", choices=("hex", "json"), default="hex")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_sensitivity)

    for name in ("avalanche", "uniformity", "collision"):
        p = sub.add_parser(name, help=f"{name} test on a seeded corpus")
        _add_params(p)
        _add_run(p)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=Path)
        p.set_defaults(func=lambda a, which=name: _single_test(a, which))

    p = sub.add_parser("battery", help="avalanche, uniformity and collision tests on one corpus")
    _add_params(p, multi=True)
    _add_run(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, help="report directory (default ./qhfm-reports)")
    p.set_defaults(func=cmd_battery)

    p = sub.add_parser("oracle-check", help="compare recurrences against dense unitaries")
    p.add_argument("--sizes", type=int, nargs="+", metavar="N", help="cycle sizes (default 3 5 7)")
    p.add_argument("--messages", type=int, default=200)
    p.add_argument("--bits", type=int, default=64)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--theta0", type=float, default=None)
    p.add_argument("--theta1", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", type=Path)
    p.add_argument("--corrupt-coin", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("bench", help="time hashing against message length and cycle size")
    p.add_argument("--min-exp", type=int, default=12, help="shortest message is 2**min_exp bits")
    p.add_argument("--max-exp", type=int, default=17)
    p.add_argument("--sizes", type=int, nargs="+", default=[15, 17, 25, 33, 37])
    p.add_argument("--fixed-n", type=int, default=25)
    p.add_argument("--fixed-length", type=int, default=2**14)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidParams) as exc:
        print(f"qhfm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CorpusError) as exc:
        print(f"qhfm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
