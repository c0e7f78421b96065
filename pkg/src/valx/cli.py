"""Command-line driver: ``valx extensions | eval | balls | pseudo | corpus``.

Exit status is 0 on success, 1 on bad input and 2 when an internal
invariant check fails (a bug, reported with the offending chain).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .balls import geometry
from .basefield import BaseField
from .chain import Chain, KeyViolation, ValueViolation
from .extend import InvariantViolation, extensions
from .parsing import ParseError, parse_poly, parse_scalar
from .pclab import NonSimpleSeed, classify, from_hensel, from_series, limit_degree, profile
from .values import value_to_json

EXIT_OK, EXIT_INPUT, EXIT_BUG = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- subcommand bodies ----------------------------------------------------------


def _base(args) -> BaseField:
    if args.base in ("qp", "fpt") and args.prime is None:
        raise InputError(f"--base {args.base} needs --prime")
    return BaseField(args.base, args.prime)


def extension_report(K: BaseField, phi, stage_bound: Optional[int] = None, with_geometry: bool = True) -> dict:
    rep = extensions(K, phi, stage_bound=stage_bound)
    out = rep.to_json()
    if with_geometry:
        out["geometry"] = [geometry(b) for b in rep.branches]
    return out


def cmd_extensions(args) -> dict:
    K = _base(args)
    return extension_report(K, parse_poly(args.poly, K), args.stage_bound, not args.no_geometry)


def cmd_eval(args) -> dict:
    try:
        obj = json.loads(args.chain)
    except json.JSONDecodeError as e:
        raise InputError(f"--chain is not JSON: line {e.lineno}, column {e.colno}: {e.msg}") from None
    chain = Chain.from_json(obj)
    f = parse_poly(args.poly, chain.base)
    return {"chain": chain.to_json(), "poly": f.format(), "value": value_to_json(chain.eval(f))}


def cmd_balls(args) -> dict:
    K = _base(args)
    rep = extensions(K, parse_poly(args.poly, K), stage_bound=args.stage_bound)
    return {
        "poly": rep.phi.format(),
        "branches": [{"e": b.e, "f": b.f, **geometry(b)} for b in rep.branches],
    }


def cmd_pseudo(args) -> dict:
    K = _base(args)
    if args.hensel:
        if args.target is None or args.seed is None:
            raise InputError("--hensel needs --target and --seed")
        seq = from_hensel(K, parse_poly(args.target, K), parse_scalar(args.seed, K), args.steps)
    elif args.series is not None:
        coeffs = [parse_scalar(c, K) for c in args.series.split(",")]
        seq = from_series(K, coeffs, args.steps)
    else:
        raise InputError("pseudo needs --hensel or --series")
    tests = []
    for text in args.test or []:
        f = parse_poly(text, K)
        prof = profile(seq, f)
        tests.append({"poly": f.format(), "profile": prof.to_json(), "classification": classify(seq, f, prof).to_json()})
    out = {"sequence": seq.to_json(), "tests": tests}
    if args.max_degree:
        extra = [parse_poly(c, K) for c in args.candidate or []]
        out["limit"] = limit_degree(seq, args.max_degree, extra).to_json()
    return out


# -- corpus runner ----------------------------------------------------------------


def _corpus_entry(job) -> tuple[int, dict]:
    """Process one input line; returns (exit code, record)."""
    lineno, line, stage_bound = job
    try:
        obj = json.loads(line)
        K = BaseField.from_json(obj["base"])
        phi = parse_poly(obj["poly"], K)
        rec = extension_report(K, phi, stage_bound)
        rec["line"] = lineno
        return EXIT_OK, rec
    except InvariantViolation as e:
        chain = e.chain.to_json() if getattr(e, "chain", None) is not None else None
        return EXIT_BUG, {"line": lineno, "error": "invariant violation", "message": str(e), "chain": chain}
    except (ValueError, KeyError, TypeError, ArithmeticError) as e:
        return EXIT_INPUT, {"line": lineno, "error": type(e).__name__, "message": str(e)}


def _resume_point(path: str) -> int:
    """Number of complete lines in an existing output file; a torn last line is dropped."""
    if not os.path.exists(path):
        return 0
    with open(path, "rb") as fh:
        data = fh.read()
    keep = data.rfind(b"\n") + 1
    if keep != len(data):
        with open(path, "r+b") as fh:
            fh.truncate(keep)
    return data[:keep].count(b"\n")


def run_corpus(inp: str, out: str, workers: int = 1, stage_bound: Optional[int] = None) -> dict:
    with open(inp, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    done = _resume_point(out)
    jobs = [(i + 1, ln, stage_bound) for i, ln in enumerate(lines)][done:]
    worst = EXIT_OK
    counts = {"ok": 0, "input_error": 0, "invariant_violation": 0}
    names = {EXIT_OK: "ok", EXIT_INPUT: "input_error", EXIT_BUG: "invariant_violation"}
    with open(out, "a", encoding="utf-8") as sink:
        if workers > 1 and len(jobs) > 1:
            pool = ProcessPoolExecutor(max_workers=workers)
            results = pool.map(_corpus_entry, jobs, chunksize=1)
        else:
            pool = None
            results = map(_corpus_entry, jobs)
        try:
            for code, rec in results:  # map keeps input order
                sink.write(dumps(rec) + "\n")
                sink.flush()
                counts[names[code]] += 1
                worst = max(worst, code)
        finally:
            if pool is not None:
                pool.shutdown()
    return {"exit": worst, "skipped": done, "processed": len(jobs), **counts}


def cmd_corpus(args) -> dict:
    if not os.path.exists(args.inp):
        raise InputError(f"no such input file: {args.inp}")
    summary = run_corpus(args.inp, args.out, args.workers, args.stage_bound)
    return summary


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="valx", description="Extensions of valuations by MacLane chains, with ball geometry.")
    ap.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def base_flags(p):
        p.add_argument("--base", choices=BaseField.KINDS, default="qp")
        p.add_argument("--prime", type=int)
        p.add_argument("--stage-bound", type=int, default=None)

    p = sub.add_parser("extensions", help="all extensions of nu to K[x]/(phi)")
    base_flags(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--no-geometry", action="store_true")
    p.set_defaults(func=cmd_extensions)

    p = sub.add_parser("eval", help="value of a polynomial under a chain")
    p.add_argument("--chain", required=True, help="chain JSON")
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("balls", help="ball chains and jump sets of each branch")
    base_flags(p)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_balls)

    p = sub.add_parser("pseudo", help="pseudo-convergent sequence profiles")
    base_flags(p)
    p.add_argument("--hensel", action="store_true")
    p.add_argument("--target")
    p.add_argument("--seed")
    p.add_argument("--series", help="comma-separated coefficients of a power series in the uniformizer")
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--test", action="append", help="polynomial to profile (repeatable)")
    p.add_argument("--max-degree", type=int, default=0)
    p.add_argument("--candidate", action="append", help="extra limit_degree candidate (repeatable)")
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("corpus", help="run extensions on every line of a JSONL file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stage-bound", type=int, default=None)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except InputError as e:
        print(f"valx: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as e:
        print(f"valx: parse error at line {e.line}, column {e.column}: {e.msg}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"valx: internal invariant violated: {e}", file=sys.stderr)
        if getattr(e, "chain", None) is not None:
            print(dumps(e.chain.to_json(), pretty=True), file=sys.stderr)
        traceback.print_exc(file=sys.stderr)
        return EXIT_BUG
    except (KeyViolation, ValueViolation, NonSimpleSeed, ValueError, KeyError, ZeroDivisionError) as e:
        print(f"valx: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"valx: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps(result, pretty=args.pretty))
    if args.command == "corpus":
        return result["exit"]
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
