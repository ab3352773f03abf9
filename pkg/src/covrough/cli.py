"""Command-line surface: build, approx, update, verify, compress, bench.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 precondition
violation, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .core import (
    BlockFamily,
    CovroughError,
    InternalCheckError,
    ObjectSet,
    ParseError,
    PreconditionError,
    parse_family,
    serialize_family,
    validate,
)
from .charmat import (
    LoadedState,
    block_gamma,
    block_pi,
    build_cache,
    definitional_gamma,
    definitional_pi,
    load_state,
    state_json,
)
from .approx import OPERATOR_NAMES, approx_matrix, approx_oracle, equivalence_report, gram_equals_pi
from .compress import approx_via_compression, parse_map
from .dynamic import run_script
from .errata import discrepancy_report, verify_errata
from .matrix import leq
from . import bench as bench_mod

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covrough", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build the characteristic matrices of a covering file")
    p_build.add_argument("covering", help="covering file path")
    p_build.add_argument("--state", help="write session state JSON here")
    p_build.add_argument("--gamma-out", help="write the type-1 matrix dump here")
    p_build.add_argument("--pi-out", help="write the type-2 matrix dump here")
    p_build.add_argument("--block", help="dump the per-block matrices of this block instead")
    p_build.add_argument("--threads", type=_positive_int, default=1,
                         help="parallelism cap (kernels are currently single-threaded)")
    p_build.set_defaults(func=_cmd_build)

    p_approx = sub.add_parser("approx", help="approximate a query set")
    p_approx.add_argument("state", help="session state JSON path")
    p_approx.add_argument("--set", required=True, dest="query",
                          help="comma-separated labels, or @file with one label per line")
    mode = p_approx.add_mutually_exclusive_group()
    mode.add_argument("--matrix", action="store_true", help="matrix form (default)")
    mode.add_argument("--oracle", action="store_true", help="set-theoretic form")
    mode.add_argument("--report", action="store_true", help="compare both forms per operator")
    p_approx.add_argument("--vectors", action="store_true", help="also print 0/1 vectors")
    p_approx.set_defaults(func=_cmd_approx)

    p_update = sub.add_parser("update", help="apply a delta script incrementally")
    p_update.add_argument("state", help="session state JSON path")
    p_update.add_argument("script", help="delta script path")
    p_update.add_argument("--state-out", help="output state path (default: overwrite input)")
    p_update.add_argument("--threads", type=_positive_int, default=1,
                          help="parallelism cap (kernels are currently single-threaded)")
    p_update.set_defaults(func=_cmd_update)

    p_verify = sub.add_parser("verify", help="run the invariant suite on a state file")
    p_verify.add_argument("state", help="session state JSON path")
    p_verify.add_argument("--errata", action="store_true",
                          help="also print the documented-discrepancy report")
    p_verify.set_defaults(func=_cmd_verify)

    p_compress = sub.add_parser("compress", help="approximate through a consistent quotient map")
    p_compress.add_argument("state", help="session state JSON path")
    p_compress.add_argument("--map", required=True, dest="map_file", help="map file path")
    p_compress.add_argument("--set", required=True, dest="query",
                            help="comma-separated labels, or @file")
    p_compress.set_defaults(func=_cmd_compress)

    p_bench = sub.add_parser("bench", help="time incremental updates against rebuilds")
    p_bench.add_argument("--n", type=_positive_int, default=2000, help="universe size")
    p_bench.add_argument("--m", type=_positive_int, default=64, help="block count")
    p_bench.add_argument("--deltas", type=_positive_int, default=3, help="deltas per kind")
    p_bench.add_argument("--seed", type=int, default=42,
                         help="random seed (the RSEED environment variable overrides this)")
    p_bench.add_argument("--naive", action="store_true",
                         help="also compare fast construction against the naive triple loop")
    p_bench.add_argument("--threads", type=_positive_int, default=1,
                         help="parallelism cap (kernels are currently single-threaded)")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> LoadedState:
    return load_state(_read_text(path))


def _parse_query(text: str, family: BlockFamily) -> ObjectSet:
    if text.startswith("@"):
        labels = [line.strip() for line in _read_text(text[1:]).splitlines() if line.strip()]
    else:
        labels = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return ObjectSet.from_labels(family.universe, labels)
    except PreconditionError:
        raise
    except CovroughError as exc:
        raise ParseError(str(exc)) from None


def _labels_line(name: str, objset: ObjectSet) -> str:
    labels = " ".join(objset.labels())
    return f"{name}: {labels}".rstrip()


def _vector_line(name: str, objset: ObjectSet) -> str:
    bits = " ".join(str(objset.bits >> i & 1) for i in range(objset.universe.size))
    return f"{name} vec: {bits}"


def _cmd_build(args: argparse.Namespace) -> int:
    _, family = parse_family(_read_text(args.covering))
    cache = build_cache(family)
    if args.block is not None:
        gamma = block_gamma(family, args.block)
        pi = block_pi(family, args.block)
    else:
        gamma, pi = cache.gamma, cache.pi
    wrote_file = False
    if args.gamma_out:
        Path(args.gamma_out).write_text(gamma.dumps(), encoding="utf-8")
        wrote_file = True
    if args.pi_out:
        Path(args.pi_out).write_text(pi.dumps(), encoding="utf-8")
        wrote_file = True
    if not wrote_file:
        sys.stdout.write("gamma:\n" + gamma.dumps())
        sys.stdout.write("pi:\n" + pi.dumps())
    if args.state:
        Path(args.state).write_text(
            state_json(cache, history=(), origin=serialize_family(family)),
            encoding="utf-8",
        )
        print(f"state written: {args.state}")
    return EXIT_OK


def _cmd_approx(args: argparse.Namespace) -> int:
    loaded = _load(args.state)
    family = loaded.cache.family
    x = _parse_query(args.query, family)
    if args.report:
        report = equivalence_report(family, x, cache=loaded.cache)
        for op in report.operators:
            label = op.name.upper()
            if op.matches:
                print(f"{label}: match ({' '.join(op.matrix_value.labels())})")
            else:
                print(
                    f"{label}: MISMATCH matrix=({' '.join(op.matrix_value.labels())}) "
                    f"oracle=({' '.join(op.oracle_value.labels())})"
                )
        return EXIT_OK
    if args.oracle:
        result = approx_oracle(family, x)
    else:
        result = approx_matrix(loaded.cache, x)
    for name in OPERATOR_NAMES:
        print(_labels_line(name.upper(), getattr(result, name)))
        if args.vectors:
            print(_vector_line(name.upper(), getattr(result, name)))
    return EXIT_OK


def _cmd_update(args: argparse.Namespace) -> int:
    loaded = _load(args.state)
    script_text = _read_text(args.script)
    new_cache, steps = run_script(loaded.cache, script_text)
    script_lines = {
        lineno: line.strip()
        for lineno, line in enumerate(script_text.splitlines(), start=1)
    }
    for step in steps:
        print(f"line {step.line}: {script_lines.get(step.line, '?')} -- {step.summary}")
    sys.stdout.write("gamma:\n" + new_cache.gamma.dumps())
    sys.stdout.write("pi:\n" + new_cache.pi.dumps())
    out_path = args.state_out or args.state
    origin = loaded.origin
    if origin is None:
        origin = serialize_family(loaded.cache.family)
    history = loaded.history + tuple(
        script_lines[step.line] for step in steps
    )
    Path(out_path).write_text(
        state_json(new_cache, history=history, origin=origin), encoding="utf-8"
    )
    print(f"state written: {out_path}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    loaded = _load(args.state)  # digest verification happens on load
    cache = loaded.cache
    family = cache.family
    print("ok: state digests match the recomputed matrices")

    failures = []

    def check(name: str, condition: bool) -> None:
        if condition:
            print(f"ok: {name}")
        else:
            failures.append(name)
            print(f"FAIL: {name}")

    check("fast gamma equals its defining product", cache.gamma == definitional_gamma(family))
    check("fast pi equals its defining product", cache.pi == definitional_pi(family))
    check("gamma is symmetric", cache.gamma.is_symmetric())
    check(
        "gamma diagonal marks exactly the covered objects",
        cache.gamma.diagonal_bits() == cache.covered_bits(),
    )
    report = validate(family)
    if report.is_covering:
        check("pi is boolean with a unit diagonal (covering)",
              not cache.pi.has_twos()
              and all(cache.pi.ge1[i] >> i & 1 for i in range(cache.n)))
        check("pi <= gamma (covering)", leq(cache.pi.to_bool(), cache.gamma))
        gram = gram_equals_pi(cache)
        print(f"report: gram identity (transpose(pi) * pi == pi): {'TRUE' if gram else 'FALSE'}")
    else:
        print(f"skip: covering-only checks (uncovered: {' '.join(report.uncovered.labels())})")
    if loaded.origin is not None:
        _, origin_family = parse_family(loaded.origin)
        replayed, _ = run_script(build_cache(origin_family), "\n".join(loaded.history))
        check("history replays from the origin to the current state", replayed == cache)
    if args.errata:
        print(discrepancy_report(), end="")
        check("documented discrepancies verify against definitional rebuilds",
              all(c.ok for c in verify_errata()))
    if failures:
        print(f"verification FAILED ({len(failures)} check(s))")
        return EXIT_INTERNAL
    print("verification passed")
    return EXIT_OK


def _cmd_compress(args: argparse.Namespace) -> int:
    loaded = _load(args.state)
    family = loaded.cache.family
    cmap = parse_map(_read_text(args.map_file), family.universe)
    x = _parse_query(args.query, family)
    result = approx_via_compression(family, cmap, x)
    print(_labels_line("f(X)", result.image_x))
    print(_labels_line("SH(f(X))", result.image_sh))
    print(_labels_line("SL(f(X))", result.image_sl))
    print(_labels_line("SH", result.sh))
    print(_labels_line("SL", result.sl))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    seed = args.seed
    env_seed = os.environ.get("RSEED")
    if env_seed is not None:
        seed = int(env_seed)
    print(f"space: n={args.n} m={args.m} seed={seed}")
    rows = bench_mod.bench_incremental(args.n, args.m, args.deltas, seed)
    print(f"{'kind':<6}{'deltas':>7}{'incremental':>14}{'rebuild':>12}{'speedup':>10}  identical")
    for row in rows:
        print(
            f"{row.kind:<6}{row.deltas:>7}{row.incremental_s:>13.4f}s{row.rebuild_s:>11.4f}s"
            f"{row.speedup:>9.1f}x  {'yes' if row.identical else 'NO'}"
        )
    if args.naive:
        build = bench_mod.bench_build(min(args.n, 1000), min(args.m, 32), seed)
        print(
            f"build n={build.n} m={build.m}: fast {build.fast_s:.4f}s, "
            f"naive {build.naive_s:.4f}s, speedup {build.speedup:.1f}x, "
            f"identical {'yes' if build.identical else 'NO'}"
        )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse --help exits 0, usage errors exit 1
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # any other failure is an internal one
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
