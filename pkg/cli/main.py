"""
monopiped command line.

Records and tables go to stdout, summaries and logs to stderr.
Exit codes: 0 success, 2 well-formed but negative outcome, 1 usage or IO error.
"""

from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, List, Optional

import click
import typer

from cli.catalog_io import read_catalog, write_catalog
from cli.models import CatalogRecord
from config.logging_config import setup_logging
from config.settings import settings
from core.errors import DegenerateParameterError, PipedError, SelfCheckError
from core.families import FamilyId, evaluate, family, ratio_345_holds, verify_family_identities
from core.piped import (
    EQUATION_LABELS,
    MonoclinicPiped,
    is_realizable,
    realizability_issues,
    verify_equations,
)
from core.search import ScanEngine, build_entry, coverage as coverage_report
from core.validity import Classification, classify, range_spec, realizable_ratio, self_check


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2

# lets "-1" through as a positional argument
SIGNED_ARGS = {"ignore_unknown_options": True}

app = typer.Typer(name="monopiped", help="Integer monoclinic parallelepipeds: families, ranges, search",
                  add_completion=False)


@app.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level", help="Override PIPED_LOG_LEVEL")) -> None:
    setup_logging(log_level or settings.LOG_LEVEL, settings.LOG_FILE)


def _fail(message: str, code: int = EXIT_USAGE):
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(code=code)


@contextmanager
def _usage_errors() -> Iterator[None]:
    try:
        yield
    except (PipedError, OSError, ValueError) as e:
        _fail(str(e))


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        _fail(f"{name} must be an integer, got {text!r}")


def _parse_family(text: str) -> FamilyId:
    with _usage_errors():
        return FamilyId.parse(text)


def _catalog_format(fmt: Optional[str], out: Optional[str]) -> str:
    if fmt is None:
        return "csv" if out and out.lower().endswith(".csv") else settings.CATALOG_FORMAT
    if fmt not in ("jsonl", "csv"):
        _fail(f"--format must be jsonl or csv, got {fmt!r}")
    return fmt


# ============================================================================
# gen / identities / ranges
# ============================================================================

@app.command(context_settings=SIGNED_ARGS)
def gen(
    family_id: str = typer.Argument(..., metavar="FAMILY", help="P1, P2, P3 or P4"),
    m: str = typer.Argument(..., help="Integer parameter m"),
    n: str = typer.Argument(..., help="Integer parameter n"),
    force: bool = typer.Option(False, "--force", help="Allow n = 0"),
) -> None:
    """Evaluate a family at (m, n) and print the record with its classification."""
    fid = _parse_family(family_id)
    m_value, n_value = _parse_int(m, "m"), _parse_int(n, "n")
    if n_value == 0 and not force:
        _fail("n = 0 leaves m/n undefined; pass --force to evaluate anyway")

    verdict = classify(fid, m_value, n_value)
    try:
        raw = evaluate(fid, m_value, n_value)
    except DegenerateParameterError as e:
        _fail(str(e), EXIT_NEGATIVE)
    entry = build_entry(fid.value, m_value, n_value, raw)
    typer.echo(CatalogRecord.from_entry(entry, verdict.value).to_line())
    typer.echo(f"{fid.value}({m_value}, {n_value}): {verdict.value}", err=True)
    if verdict is not Classification.VALID:
        raise typer.Exit(code=EXIT_NEGATIVE)
    if not is_realizable(entry.primitive):
        _fail(f"{fid.value}({m_value}, {n_value}) lies in the printed ranges but is not realizable",
              EXIT_NEGATIVE)


@app.command()
def identities(
    family_id: Optional[str] = typer.Option(None, "--family", help="Check a single family"),
) -> None:
    """Check the seven equations and the 3:4:5 ratio symbolically for each family."""
    ids = [_parse_family(family_id)] if family_id else list(FamilyId)
    header = ["family"] + [f"Eq{k}" for k in range(1, 8)] + ["345"]
    typer.echo("  ".join(f"{h:<6}" for h in header).rstrip())

    passed = total = 0
    for fid in ids:
        fam = family(fid)
        report = verify_family_identities(fam)
        results = list(report.passes) + [ratio_345_holds(fam)]
        passed += sum(results)
        total += len(results)
        row = [fid.value] + ["pass" if ok else "FAIL" for ok in results]
        typer.echo("  ".join(f"{cell:<6}" for cell in row).rstrip())
        for number, residual in sorted(report.residuals.items()):
            typer.echo(f"{fid.value} Eq{number} residual: {residual}", err=True)

    typer.echo(f"{passed}/{total} pass", err=True)
    if passed != total:
        raise typer.Exit(code=EXIT_NEGATIVE)


@app.command(context_settings=SIGNED_ARGS)
def ranges(
    family_id: str = typer.Argument(..., metavar="FAMILY"),
    m: Optional[str] = typer.Argument(None),
    n: Optional[str] = typer.Argument(None),
) -> None:
    """Print the validity intervals and self-check them, or classify one (m, n)."""
    fid = _parse_family(family_id)
    if m is not None or n is not None:
        if m is None or n is None:
            _fail("give both m and n, or neither")
        m_value, n_value = _parse_int(m, "m"), _parse_int(n, "n")
        verdict = classify(fid, m_value, n_value)
        ratio = "undefined" if n_value == 0 else str(Fraction(m_value, n_value))
        typer.echo(f"{fid.value} m/n = {ratio}: {verdict.value}")
        if verdict in (Classification.VALID, Classification.OUT_OF_RANGE):
            realizable = realizable_ratio(fid, Fraction(m_value, n_value))
            typer.echo(f"realizable: {'yes' if realizable else 'no'}")
        if verdict is not Classification.VALID:
            raise typer.Exit(code=EXIT_NEGATIVE)
        return

    spec = range_spec(fid)
    for interval in spec.intervals:
        typer.echo(f"{interval.describe()}  witness {interval.witness}")
    for bound, _, side in spec.quartic_bounds():
        typer.echo(f"{bound.label} ({side} bound) is the root of {bound.quartic.render('t')} near {bound.approx}")
    try:
        report = self_check(fid)
    except SelfCheckError as e:
        _fail(str(e), EXIT_NEGATIVE)
    typer.echo(f"self-check: pass ({len(report.checks)} quartic bounds)")


# ============================================================================
# scan / search / verify / coverage
# ============================================================================

@app.command()
def scan(
    family_id: str = typer.Argument(..., metavar="FAMILY", help="P1..P4 or all"),
    height: int = typer.Option(..., "--height", help="Bound on |m| and n"),
    out: Optional[str] = typer.Option(None, "--out", help="Catalog file (stdout if omitted)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    fmt: Optional[str] = typer.Option(None, "--format", help="jsonl or csv"),
    use_dask: bool = typer.Option(settings.ENABLE_DASK, "--dask/--no-dask", help="Run chunks on dask.bag"),
) -> None:
    """Scan coprime (m, n) up to a height and write the valid entries."""
    if height < 1:
        _fail(f"--height must be at least 1, got {height}")
    fmt = _catalog_format(fmt, out)
    ids = list(FamilyId) if family_id.lower() == "all" else [_parse_family(family_id)]

    engine = ScanEngine(threads=threads, use_dask=use_dask)
    records = []
    for fid in ids:
        entries = engine.scan_family(fid, height)
        records.extend(CatalogRecord.from_entry(e) for e in entries)
        metrics = engine.metrics
        typer.echo(f"{fid.value}: {metrics['pairs_tried']} pairs tried, {metrics['valid']} valid, "
                   f"{metrics['not_realizable']} not realizable, {metrics['unique_primitives']} unique primitives", err=True)
    with _usage_errors():
        write_catalog(records, out, fmt)


@app.command()
def search(
    x_max: Optional[int] = typer.Option(None, "--x-max", help="Search every edge x up to this bound"),
    edge: Optional[int] = typer.Option(None, "--edge", help="Complete a single edge x"),
    out: Optional[str] = typer.Option(None, "--out", help="Catalog file (stdout if omitted)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    fmt: Optional[str] = typer.Option(None, "--format", help="jsonl or csv"),
) -> None:
    """Brute-force oracle: pipeds found directly from Pythagorean completions."""
    if (x_max is None) == (edge is None):
        _fail("give exactly one of --x-max and --edge")
    bound = x_max if x_max is not None else edge
    if bound < 1:
        _fail(f"edge bound must be at least 1, got {bound}")
    fmt = _catalog_format(fmt, out)

    engine = ScanEngine(threads=threads)
    entries = engine.brute_force(x_max) if x_max is not None else engine.complete_edge(edge)
    with _usage_errors():
        write_catalog([CatalogRecord.from_entry(e) for e in entries], out, fmt)
    typer.echo(f"{len(entries)} found", err=True)


def _verify_piped(piped: MonoclinicPiped, prefix: str = "") -> bool:
    report = verify_equations(piped)
    for label, ok in zip(EQUATION_LABELS, report.passes):
        typer.echo(f"{prefix}{label}: {'pass' if ok else 'FAIL'}")
    issues = realizability_issues(piped)
    typer.echo(f"{prefix}realizable: no ({'; '.join(issues)})" if issues else f"{prefix}realizable: yes")
    return report.all_pass and not issues


@app.command(context_settings=SIGNED_ARGS)
def verify(
    values: Optional[List[str]] = typer.Argument(None, metavar="X Y Z A B C1 C2 D1 D2"),
    in_file: Optional[str] = typer.Option(None, "--in", help="Catalog file to check, - for stdin"),
) -> None:
    """Check the seven equations and realizability of nine lengths or a catalog."""
    values = values or []
    if in_file is not None:
        if values:
            _fail("give nine lengths or --in, not both")
        with _usage_errors():
            records = read_catalog(in_file)
        all_ok = True
        for index, record in enumerate(records, 1):
            with _usage_errors():
                piped = record.raw_piped()
            all_ok = _verify_piped(piped, prefix=f"record {index}: ") and all_ok
        typer.echo(f"{len(records)} records checked", err=True)
        if not all_ok:
            raise typer.Exit(code=EXIT_NEGATIVE)
        return

    if len(values) != 9:
        _fail(f"expected nine lengths, got {len(values)}")
    lengths = [_parse_int(v, "length") for v in values]
    with _usage_errors():
        piped = MonoclinicPiped.from_sequence(lengths)
    if not _verify_piped(piped):
        raise typer.Exit(code=EXIT_NEGATIVE)


@app.command()
def coverage(
    oracle: str = typer.Option(..., "--oracle", help="Brute-force catalog"),
    scan_file: str = typer.Option(..., "--scan", help="Family scan catalog"),
) -> None:
    """Report which oracle pipeds some family scan reproduces."""
    with _usage_errors():
        oracle_entries = [r.to_entry() for r in read_catalog(oracle)]
        scan_entries = [r.to_entry() for r in read_catalog(scan_file)]
        report = coverage_report(oracle_entries, scan_entries)

    for match in report.matched:
        typer.echo(f"matched {','.join(map(str, match.primitive.as_tuple()))} <- {match.family}({match.m}, {match.n})")
    for entry in report.unmatched_bruteforce:
        typer.echo(f"unmatched {','.join(map(str, entry.primitive.as_tuple()))}")
    typer.echo(report.summary())


def run() -> int:
    """Process entry point; click usage errors exit 1 instead of click's 2"""
    try:
        result = app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK
