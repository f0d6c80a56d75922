"""Command-line front end.

Machine output (CSV or JSON) goes to --output or stdout; the emoji status
lines go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Callable

from realwdvv import config
from realwdvv.algebra import format_rational
from realwdvv.archive import InvariantArchive
from realwdvv.complex_gw import ComplexStore, complex_residuals, solve_complex
from realwdvv.errors import (
    ArchiveError,
    ConfigurationError,
    EngineError,
    InconsistentSystemError,
    NotSolvedError,
    ReferenceDataError,
    UnderdeterminedSystemError,
)
from realwdvv.insertions import emit_table
from realwdvv.real_wdvv import RealStore, real_residuals, solve_real
from realwdvv.reference import CellStatus, compare_table, load_reference
from realwdvv.series import (
    build_potentials,
    describe_exponent,
    series_variables,
    verify_pde,
)
from realwdvv.target import TARGETS, ProjectiveSpaceP3, basis_labels, get_target

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_FATAL = 3


def _argument(parse: Callable[[str], object]) -> Callable[[str], object]:
    def convert(raw: str):
        try:
            return parse(raw)
        except ConfigurationError as e:
            raise argparse.ArgumentTypeError(str(e)) from None

    convert.__name__ = parse.__name__
    return convert


def _t_cap(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"t cap must be an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigurationError(f"t cap must be non-negative, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-d",
        "--max-degree",
        type=_argument(config.parse_degree),
        default=config.DEFAULT_MAX_DEGREE,
        help="highest curve degree to solve (default: %(default)s)",
    )
    common.add_argument(
        "--seed",
        type=_argument(config.parse_seed),
        default=config.DEFAULT_SEED,
        help="OSpin seed sign for the degree-one invariant, +1 or -1",
    )
    common.add_argument(
        "--target", choices=sorted(TARGETS), default=config.DEFAULT_TARGET
    )
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--cache", type=Path, default=config.DEFAULT_CACHE)
    common.add_argument(
        "-o", "--output", type=Path, help="write to a file instead of stdout"
    )
    common.add_argument("--log-level", default=None)

    pde = argparse.ArgumentParser(add_help=False)
    pde.add_argument(
        "--t-cap",
        type=_argument(_t_cap),
        default=config.DEFAULT_PDE_T_CAP,
        help="total t-degree cap for the series check (0: twice the max degree)",
    )

    parser = argparse.ArgumentParser(
        prog="realwdvv",
        description=(
            "Complex and open Gromov-Witten invariants of (P3, tau3) "
            "from the real WDVV relations."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(
        "complex-table", parents=[common], help="complex counts N_d(a, b)"
    )
    commands.add_parser(
        "real-table", parents=[common], help="open invariants <l^a pt^b>_{d,k}"
    )
    commands.add_parser(
        "bounds-table", parents=[common], help="line expansions and lower bounds"
    )
    commands.add_parser(
        "verify-pde", parents=[common, pde], help="series check of both PDEs"
    )
    verify = commands.add_parser(
        "verify", parents=[common, pde], help="full verification run"
    )
    verify.add_argument(
        "--skip-pde", action="store_true", help="only diff against the reference table"
    )
    return parser


def _emit(rows: list[dict], columns: list[str], args: argparse.Namespace) -> None:
    if args.format == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    column: (
                        ",".join(map(str, value)) if isinstance(value, list) else value
                    )
                    for column, value in row.items()
                }
            )
        text = buffer.getvalue()
    if args.output:
        args.output.write_text(text, encoding="utf-8")
        logger.info("wrote %d rows to %s", len(rows), args.output)
    else:
        sys.stdout.write(text)


def _status(line: str) -> None:
    print(line, file=sys.stderr)


def _load_cache(
    args: argparse.Namespace, target: ProjectiveSpaceP3
) -> tuple[ComplexStore, RealStore] | None:
    if not args.cache or not args.cache.exists():
        return None
    archive = InvariantArchive.load(args.cache)
    covers = (
        archive.target == target.name
        and archive.seed == args.seed
        and archive.complex_degree >= args.max_degree
        and archive.real_degree >= args.max_degree
    )
    if not covers:
        logger.info("cache %s does not cover this run; solving", args.cache)
        return None
    logger.info("using cached invariants from %s", args.cache)
    return archive.to_stores(target)


def solve_stores(
    args: argparse.Namespace, target: ProjectiveSpaceP3
) -> tuple[ComplexStore, RealStore]:
    cached = _load_cache(args, target)
    if cached is not None:
        return cached
    complex_store = solve_complex(target, args.max_degree)
    real_store = solve_real(target, complex_store, args.max_degree, args.seed)
    if args.cache:
        InvariantArchive.from_stores(complex_store, real_store).save(args.cache)
    return complex_store, real_store


def cmd_complex_table(args: argparse.Namespace, target: ProjectiveSpaceP3) -> int:
    cached = _load_cache(args, target)
    complex_store = cached[0] if cached else solve_complex(target, args.max_degree)
    rows = [
        {
            "d": key.degree,
            "a": key.lines,
            "b": key.points,
            "value": format_rational(value),
        }
        for key, value in complex_store.items()
        if key.degree <= args.max_degree
    ]
    _emit(rows, ["d", "a", "b", "value"], args)
    _status(f"✅ {len(rows)} complex invariants up to degree {args.max_degree}")
    return EXIT_OK


def cmd_real_table(args: argparse.Namespace, target: ProjectiveSpaceP3) -> int:
    _, real_store = solve_stores(args, target)
    rows = []
    for key, value in real_store.items():
        if key.degree > args.max_degree:
            continue
        lines, points = target.line_point_counts(key.insertions)
        rows.append(
            {
                "d": key.degree,
                "a": lines,
                "b": points,
                "k": key.points,
                "value": format_rational(value),
            }
        )
    _emit(rows, ["d", "a", "b", "k", "value"], args)
    _status(
        f"✅ {len(rows)} open invariants up to degree {args.max_degree} "
        f"(seed {args.seed:+d})"
    )
    return EXIT_OK


def cmd_bounds_table(args: argparse.Namespace, target: ProjectiveSpaceP3) -> int:
    complex_store, real_store = solve_stores(args, target)
    table = emit_table(real_store, complex_store, args.max_degree)
    report = compare_table(table, load_reference())
    rows = [
        {
            "d": row.degree,
            "a": row.lines,
            "b": row.points,
            "k": row.real_points,
            "averaged": row.averaged,
            "expansion": list(row.expansion),
            "minimum": row.minimum,
            "complex": row.complex_count,
            "reference": report.row_status((row.degree, row.lines, row.points)).value,
        }
        for row in table
    ]
    _emit(rows, list(rows[0]), args)
    extrapolated = sum(
        row["reference"] == CellStatus.EXTRAPOLATED.value for row in rows
    )
    if report.passed:
        _status(f"✅ {len(rows) - extrapolated} rows agree with the reference table")
    else:
        _status(f"❌ {len(report.mismatches())} cells disagree with the reference table")
    if extrapolated:
        _status(f"⚠️ {extrapolated} rows lie beyond the reference table")
    return EXIT_OK


def _pde_cap(args: argparse.Namespace) -> int:
    return args.t_cap or 2 * args.max_degree


def cmd_verify_pde(args: argparse.Namespace, target: ProjectiveSpaceP3) -> int:
    complex_store, real_store = solve_stores(args, target)
    pair = build_potentials(
        target, complex_store, real_store, args.max_degree, _pde_cap(args)
    )
    variables = series_variables(target)
    reports = verify_pde(pair)
    rows = [
        {
            "relation": report.relation.kind,
            "indices": basis_labels(target, report.relation.slots),
            "status": "pass" if report.passed else "fail",
            "first_exponent": (
                describe_exponent(variables, report.first_exponent)
                if report.first_exponent
                else ""
            ),
            "value": (
                format_rational(report.value) if report.value is not None else ""
            ),
        }
        for report in reports
    ]
    _emit(rows, ["relation", "indices", "status", "first_exponent", "value"], args)
    failed = [report for report in reports if not report.passed]
    if failed:
        _status(f"❌ {len(failed)} of {len(reports)} PDE residuals are nonzero")
        return EXIT_FAILED
    _status(
        f"✅ all {len(reports)} PDE residuals vanish "
        f"(q ≤ {args.max_degree}, t ≤ {_pde_cap(args)})"
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, target: ProjectiveSpaceP3) -> int:
    complex_store, real_store = solve_stores(args, target)
    checks: list[tuple[str, str | None]] = []

    table = emit_table(real_store, complex_store, args.max_degree)
    report = compare_table(table, load_reference())
    failure = None
    if report.mismatches():
        first = report.mismatches()[0]
        failure = (
            f"d,a,b={first.label} {first.column}: "
            f"expected {first.expected}, got {first.actual}"
        )
    elif report.missing:
        failure = f"missing rows {report.missing}"
    checks.append(("reference table", failure))

    if not args.skip_pde:
        failures = complex_residuals(complex_store, args.max_degree)
        checks.append(
            (
                "complex associativity",
                f"{failures[0][0]} = {failures[0][1]}" if failures else None,
            )
        )

        broken = real_residuals(real_store, complex_store, args.max_degree)
        checks.append(
            (
                "real relations",
                f"{broken[0]} = {broken[0].constant}" if broken else None,
            )
        )

        violations = real_store.parity_violations()
        checks.append(("parity vanishing", str(violations[0]) if violations else None))

        opposite = solve_real(target, complex_store, args.max_degree, -args.seed)
        expected = real_store.truncated(args.max_degree).flipped()
        checks.append(
            (
                "seed symmetry",
                None if opposite == expected else "opposite seed is not (-1)^(k+1) v",
            )
        )

        pair = build_potentials(
            target, complex_store, real_store, args.max_degree, _pde_cap(args)
        )
        bad = [pde for pde in verify_pde(pair) if not pde.passed]
        failure = None
        if bad:
            where = describe_exponent(series_variables(target), bad[0].first_exponent)
            failure = f"{bad[0].relation} at {where}"
        checks.append(("PDE residuals", failure))

    for name, failure in checks:
        _status(f"❌ {name}: {failure}" if failure else f"✅ {name}")
    return EXIT_FAILED if any(failure for _, failure in checks) else EXIT_OK


COMMANDS = {
    "complex-table": cmd_complex_table,
    "real-table": cmd_real_table,
    "bounds-table": cmd_bounds_table,
    "verify-pde": cmd_verify_pde,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config.configure_logging(args.log_level)
        target = get_target(args.target)
        return COMMANDS[args.command](args, target)
    except ConfigurationError as e:
        _status(f"❌ {e}")
        return EXIT_USAGE
    except (InconsistentSystemError, UnderdeterminedSystemError, NotSolvedError) as e:
        _status(f"❌ Solver failure: {e}")
        return EXIT_FATAL
    except (ArchiveError, ReferenceDataError) as e:
        _status(f"❌ {e}")
        return EXIT_FATAL
    except EngineError as e:
        _status(f"❌ Fatal error: {e}")
        return EXIT_FATAL
    except OSError as e:
        _status(f"❌ I/O error: {e}")
        return EXIT_FATAL
