"""Command-line entry point.

Exit codes: 0 success, 1 criteria failure, 2 configuration error,
3 internal validation failure.  ``TORUS_HARMONICS_THREADS`` caps the number
of worker threads the self-test uses (one q per worker).
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import RunConfig, thread_count
from .errors import ConfigError, ValidationFailed

EXIT_OK, EXIT_CRITERIA, EXIT_CONFIG, EXIT_VALIDATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _common(p, multi_q=False):
    if multi_q:
        p.add_argument("--q", type=int, nargs="+", default=[3, 5, 7], help="odd primes")
    else:
        p.add_argument("--q", type=int, required=True, help="odd prime")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="output file (directory for selftest)")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torus-harmonics", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("field-info", help="field and group data"))
    _common(sub.add_parser("chartable", help="character table"))
    _common(sub.add_parser("doublecosets", help="K double cosets"))
    s = sub.add_parser("decompose", help="multiplicities in Ind Phi")
    _common(s)
    s.add_argument("--phi", type=int, required=True, help="dual index j of Phi")
    s = sub.add_parser("spherical", help="cuspidal spherical function per coset")
    _common(s)
    s.add_argument("--phi", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int, required=True, help="dual index of Lambda")
    s = sub.add_parser("uncertainty", help="uncertainty margins")
    _common(s)
    s.add_argument("--phi", type=int, required=True)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exhaustive", action="store_true", help="add the coset basis and spherical functions")
    s = sub.add_parser("selftest", help="run the acceptance criteria and write FINDINGS.md")
    _common(s, multi_q=True)
    s.add_argument("--seed", type=int, default=0)
    return p


def _emit(text: str, output: str | None) -> None:
    from .reports import write_text
    if output:
        write_text(output, text)
    else:
        sys.stdout.write(text)


def _single(args, cfg: RunConfig) -> int:
    from . import reports
    from .character_table import build_character_table

    q = cfg.qs[0]
    table = build_character_table(q)
    cmd = args.command
    if cmd in ("decompose", "spherical", "uncertainty"):
        if args.phi < 0:
            raise ConfigError("--phi must be a non-negative dual index")
    if cmd == "field-info":
        rows = reports.field_info_rows(table)
    elif cmd == "chartable":
        rows = reports.chartable_rows(table)
    elif cmd == "doublecosets":
        rows = reports.doublecoset_rows(table.group)
    elif cmd == "decompose":
        rows = reports.decomposition_rows(table, args.phi)
    elif cmd == "spherical":
        rows = reports.spherical_rows(table, args.phi, args.lam)
    else:
        if args.samples < 0:
            raise ConfigError("--samples must be >= 0")
        rows = reports.uncertainty_rows(table, args.phi, args.samples, cfg.seed, args.exhaustive)
        if any(r["margin"] < 0 for r in rows):
            _emit(reports.render(rows, cfg.fmt), cfg.output)
            return EXIT_CRITERIA
    _emit(reports.render(rows, cfg.fmt), cfg.output)
    return EXIT_OK


def _selftest(cfg: RunConfig, threads: int) -> int:
    from .selftest import emit_reports, run_selftest
    report = run_selftest(cfg, threads)
    for r in report.results:
        print(r.line())
    out = emit_reports(report)
    print(f"reports written to {out}")
    if report.failures:
        print(json.dumps({"failed_criteria": report.failures}), file=sys.stderr)
    return report.exit_code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        threads = thread_count()
        output = args.output
        if args.command == "selftest" and output is None:
            output = "torus_harmonics_report"
        cfg = RunConfig(qs=tuple(args.q) if isinstance(args.q, list) else (args.q,),
                        tolerance=args.tolerance, seed=getattr(args, "seed", 0),
                        fmt=args.format, output=output, verbosity=args.verbose)
        if args.command == "selftest":
            return _selftest(cfg, threads)
        return _single(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationFailed as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
