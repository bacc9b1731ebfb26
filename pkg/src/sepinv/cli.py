"""Command line: ``sepinv verify FILE`` and ``sepinv bench DIR``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .domains import DOMAINS
from .driver import RunConfig, run_verification
from .frontend import ParseError, parse_system, print_smt2
from .separator import SeparatorBuilder

EXIT = {"SAFE": 0, "UNSAFE": 1, "UNKNOWN": 2}
USAGE_ERROR = 3
CSV_HEADER = ["name", "outcome", "iterations", "pool", "elapsed_ms",
              "domain", "separator"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _template_bound(text: str | None) -> int | None:
    if text is None:
        return None
    kind, _, c = text.partition(":")
    if kind != "octagon-templates" or not c.isdigit():
        raise argparse.ArgumentTypeError(
            f"expected octagon-templates:<c>, got {text!r}")
    return int(c)


def _common(p: argparse.ArgumentParser, multi_domain: bool = False) -> None:
    if multi_domain:
        p.add_argument("--domain", default="poly",
                       help="int, oct, poly, a comma list, or 'all'")
    else:
        p.add_argument("--domain", choices=sorted(DOMAINS), default="poly")
    p.add_argument("--separator", choices=SeparatorBuilder.VARIANTS,
                   default="incremental")
    p.add_argument("--teacher", default="builtin:16",
                   help="builtin:<B> or smt:<solver command>")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--timeout-secs", type=float, default=300.0)
    p.add_argument("--query-timeout", type=float, default=10.0)
    p.add_argument("--penalty", type=float, default=1.0)
    p.add_argument("--attrs", default=None, metavar="octagon-templates:<c>",
                   help="baseline: enumerate octagon attributes instead of "
                        "deriving them from separators")
    p.add_argument("--trace", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepinv",
                     description="Invariant synthesis with separator-based "
                                 "ICE decision-tree learning.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    v = sub.add_parser("verify", help="verify one transition system")
    v.add_argument("file")
    _common(v)
    b = sub.add_parser("bench", help="run every .ts file of a directory")
    b.add_argument("dir")
    _common(b, multi_domain=True)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--csv", default=None, help="write rows here (default stdout)")
    return parser


def _config(args, domain: str) -> RunConfig:
    return RunConfig(domain=domain, separator=args.separator,
                     teacher=args.teacher, max_iterations=args.max_iters,
                     budget_secs=args.timeout_secs, penalty=args.penalty,
                     trace=args.trace, query_timeout=args.query_timeout,
                     template_bound=_template_bound(args.attrs))


def cmd_verify(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    try:
        system = parse_system(text)
    except ParseError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return USAGE_ERROR
    try:
        cfg = _config(args, args.domain)
        result = run_verification(system, cfg)
    except (ValueError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    print(result.outcome)
    if result.outcome == "SAFE":
        print(print_smt2(result.invariant, system.vars))
    elif result.outcome == "UNSAFE":
        print("witness " + " ".join(
            f"{v}={x}" for v, x in zip(system.vars, result.witness)))
    else:
        print(f"reason: {result.reason}", file=sys.stderr)
    return EXIT[result.outcome]


def bench_one(path: str, cfg: RunConfig) -> list:
    name = Path(path).name
    start = time.monotonic()
    try:
        system = parse_system(Path(path).read_text(encoding="utf-8"))
        res = run_verification(system, cfg)
        outcome, iters, pool = res.outcome, res.stats.iterations, res.stats.pool
    except (OSError, ParseError, UnicodeDecodeError, ValueError):
        outcome, iters, pool = "ERROR", 0, 0
    ms = int((time.monotonic() - start) * 1000)
    return [name, outcome, iters, pool, ms, cfg.domain, cfg.separator]


def _domains(text: str) -> list[str]:
    if text == "all":
        return ["int", "oct", "poly"]
    out = [d.strip() for d in text.split(",") if d.strip()]
    bad = [d for d in out if d not in DOMAINS]
    if bad or not out:
        raise ValueError(f"unknown domain(s): {', '.join(bad) or text!r}")
    return out


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"error: {args.dir} is not a readable directory", file=sys.stderr)
        return USAGE_ERROR
    try:
        doms = _domains(args.domain)
        cfgs = [_config(args, d) for d in doms]
    except (ValueError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    files = sorted(str(p) for p in root.glob("*.ts"))
    jobs = [(f, c) for c in cfgs for f in files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(bench_one, *zip(*jobs)))
    else:
        rows = [bench_one(f, c) for f, c in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    for d in doms:
        mine = [r for r in rows if r[5] == d]
        safe = sum(r[1] == "SAFE" for r in mine)
        unsafe = sum(r[1] == "UNSAFE" for r in mine)
        prefix = f"[{d}] " if len(doms) > 1 else ""
        print(f"{prefix}solved {safe} safe / {unsafe} unsafe / total {len(mine)}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else USAGE_ERROR
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
