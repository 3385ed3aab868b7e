"""Command line interface for liebi.

Exit codes: 0 on success, 1 for mathematically invalid input or any other
non-verdict error, 2 for documents which can't be read or parsed.

Run with:

    shell> liebi atiyah catalog:hong-liu-3d
"""

import datetime
import sys
from pathlib import Path
from typing import NoReturn

import humanize
import msgspec
import rich_click as click
from rich.console import Console
from rich.table import Table

from .atiyah import AtiyahReport, full_report
from .bialgebra import (
    ConsistencyError,
    LieBialgebra,
    NotAMatchedPairError,
    build_double,
)
from .catalog import SizeCapError, UnknownEntryError, get_entry, list_entries
from .click_options import report_click_options, runtime_click_options
from .documents import (
    DocumentError,
    ReportDocument,
    document_from_entry,
    document_to_bialgebra,
    document_to_lie,
    load_document,
    report_document,
    verify_report,
)
from .lie import Violation, validate_lie
from .ratmath import format_rational
from .runtime_environment import configure_logging, get_runtime_environment

CLICK_CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}
CATALOG_PREFIX = "catalog:"

EXIT_INVALID = 1
EXIT_PARSE_ERROR = 2

console = Console()
error_console = Console(stderr=True)


def _fail(message: str, exit_code: int = EXIT_INVALID) -> NoReturn:
    error_console.print(f"[bold red]Error:[/bold red] {message}", highlight=False)
    sys.exit(exit_code)


def _print_violations(violations: list[Violation]) -> None:
    table = Table("Kind", "Indices", "Detail", title="Violations")
    for violation in violations:
        table.add_row(
            violation.kind,
            ", ".join(str(index) for index in violation.indices),
            violation.detail,
        )
    console.print(table)


def _load_bialgebra(source: str) -> tuple[LieBialgebra, str, str]:
    """Resolve `catalog:NAME` or a document path into a validated bialgebra."""
    if source.startswith(CATALOG_PREFIX):
        name = source.removeprefix(CATALOG_PREFIX)
        try:
            entry = get_entry(name)
        except UnknownEntryError:
            _fail(f"No catalog entry named {name!r}")
        except SizeCapError as error:
            _fail(str(error))
        return entry.bialgebra, entry.name, entry.provenance

    try:
        document = load_document(Path(source))
        validation = document_to_bialgebra(document)
    except OSError as error:
        _fail(f"Can't read {source}: {error}", EXIT_PARSE_ERROR)
    except DocumentError as error:
        _fail(f"{source}: {error}", EXIT_PARSE_ERROR)
    if not validation.ok:
        _print_violations(list(validation.violations))
        _fail(f"{source} is not a Lie bialgebra")
    return validation.bialgebra, document.name, document.provenance  # type: ignore


def _print_report(report: AtiyahReport, name: str, duration: str) -> None:
    def verdict(value: bool | None) -> str:
        if value is None:
            return "[dim]not computed[/dim]"
        return "[green]yes[/green]" if value else "[red]no[/red]"

    def vector_text(values) -> str:
        return "(" + ", ".join(format_rational(value) for value in values) + ")"

    table = Table("Quantity", "Value", title=f"Atiyah classes of {name}")
    table.add_row("Atiyah class vanishes", verdict(report.vanishing))
    table.add_row("c1 vanishes", verdict(report.c1_vanishing))
    table.add_row("Modular vector κ", vector_text(report.kappa))
    if report.witness_v is not None:
        table.add_row("v with ad*_κ = ad_v", vector_text(report.witness_v))
    if report.center_obstruction is not None:
        witness = report.center_obstruction
        table.add_row(
            "Center obstruction",
            f"x={vector_text(witness.x)}, ξ={vector_text(witness.xi)}, "
            f"ad*_ξ x={vector_text(witness.image)}",
        )
    table.add_row("Coboundary (γ = δr)", verdict(report.r_matrix is not None))
    if report.atiyah_certificate is not None:
        certificate = report.atiyah_certificate
        table.add_row(
            "Atiyah system",
            f"{certificate.equations}x{certificate.unknowns}, rank "
            f"{certificate.rank}, augmented rank {certificate.augmented_rank}",
        )
    certificate = report.c1_certificate
    table.add_row(
        "c1 system",
        f"{certificate.equations}x{certificate.unknowns}, rank {certificate.rank}, "
        f"augmented rank {certificate.augmented_rank}",
    )
    table.add_row("c1 prefactor", report.prefactor)
    console.print(table)
    console.print(f"Computed in {duration}.")


@click.group(context_settings=CLICK_CONTEXT_SETTINGS, no_args_is_help=True)
@runtime_click_options
def main(debug: bool, max_n: int | None) -> None:
    """Decide Atiyah classes of Lie bialgebras with exact rational arithmetic."""
    runtime_env = get_runtime_environment()
    try:
        runtime_env.override(debug_mode=debug, max_n=max_n)
    except ValueError as error:
        _fail(str(error))
    configure_logging(runtime_env.debug_mode)


@main.command(context_settings=CLICK_CONTEXT_SETTINGS)
@click.argument("path", type=click.Path(path_type=Path))
def validate(path: Path) -> None:
    """Check that the document at PATH is a Lie algebra or Lie bialgebra.

    Bialgebras also have their Drinfeld double built and checked.
    """
    try:
        document = load_document(path)
        if document.is_bialgebra:
            validation = document_to_bialgebra(document)
            violations = list(validation.violations)
            if validation.ok:
                build_double(validation.bialgebra)  # type: ignore
        else:
            violations = validate_lie(document_to_lie(document)).violations()
    except OSError as error:
        _fail(f"Can't read {path}: {error}", EXIT_PARSE_ERROR)
    except DocumentError as error:
        _fail(f"{path}: {error}", EXIT_PARSE_ERROR)
    except NotAMatchedPairError as error:
        violations = list(error.violations)

    if violations:
        _print_violations(violations)
        _fail(f"{path} has {len(violations)} violation(s)")
    kind = "Lie bialgebra" if document.is_bialgebra else "Lie algebra"
    console.print(f"[green]OK[/green]: {document.name} is a valid {kind}.")


@main.command(context_settings=CLICK_CONTEXT_SETTINGS)
@click.argument("source")
@report_click_options
def atiyah(source: str, c1_only: bool, as_json: bool) -> None:
    """Compute the Atiyah class and first scalar Atiyah class of SOURCE.

    SOURCE is either `catalog:NAME` or the path of an input document.
    """
    b, name, provenance = _load_bialgebra(source)
    try:
        build_double(b)
    except NotAMatchedPairError as error:
        _print_violations(list(error.violations))
        _fail(f"{name} doesn't form a Drinfeld double")

    start_time = datetime.datetime.now(tz=datetime.timezone.utc)
    try:
        report = full_report(b, include_atiyah=not c1_only)
    except ConsistencyError as error:
        _fail(f"Internal cross-check failed: {error}")
    duration = datetime.datetime.now(tz=datetime.timezone.utc) - start_time

    if as_json:
        document = report_document(report, b, name, provenance)
        click.echo(document.encode("json").decode())
    else:
        _print_report(report, name, humanize.precisedelta(duration))


@main.command(context_settings=CLICK_CONTEXT_SETTINGS)
@click.argument("source")
@click.argument("report_path", metavar="REPORT", type=click.Path(path_type=Path))
def verify(source: str, report_path: Path) -> None:
    """Re-verify the verdicts of a JSON REPORT against SOURCE.

    Positive verdicts are checked through their witnesses (curvature of the
    connection, `ad_v = ι_κγ`), negative ones by recomputing the rank certificate.
    """
    b, name, _ = _load_bialgebra(source)
    try:
        document = ReportDocument.from_file(report_path, format="json")
        problems = verify_report(b, document)
    except OSError as error:
        _fail(f"Can't read {report_path}: {error}", EXIT_PARSE_ERROR)
    except (msgspec.DecodeError, DocumentError) as error:
        _fail(f"{report_path}: {error}", EXIT_PARSE_ERROR)

    if problems:
        for problem in problems:
            error_console.print(f"[red]✗[/red] {problem}")
        _fail(f"{report_path} is not reproduced for {name}")
    console.print(f"[green]OK[/green]: every verdict for {name} is reproduced.")


@main.group(context_settings=CLICK_CONTEXT_SETTINGS, no_args_is_help=True)
def catalog() -> None:
    """Built-in Lie bialgebras."""


@catalog.command(name="list", context_settings=CLICK_CONTEXT_SETTINGS)
def list_command() -> None:
    """List catalog entries (sl(n) entries up to the size cap)."""
    table = Table("Name", "Description")
    for name, description in list_entries():
        table.add_row(name, description)
    console.print(table)


@catalog.command(context_settings=CLICK_CONTEXT_SETTINGS)
@click.argument("name")
@click.option(
    "--emit",
    type=click.Path(path_type=Path, allow_dash=True),
    default=None,
    metavar="PATH",
    help="Write the entry as an input document to PATH ('-' for stdout). The "
    "format follows the suffix (YAML unless .json).",
)
def get(name: str, emit: Path | None) -> None:
    """Show the catalog entry NAME, or write it out as an input document."""
    try:
        entry = get_entry(name)
    except UnknownEntryError:
        _fail(f"No catalog entry named {name!r}")
    except SizeCapError as error:
        _fail(str(error))

    document = document_from_entry(entry)
    if emit is None:
        table = Table("Field", "Value", title=entry.name)
        table.add_row("Provenance", entry.provenance)
        table.add_row("Dimension", str(entry.bialgebra.dim))
        table.add_row("Basis", ", ".join(entry.bialgebra.g.basis_names))
        table.add_row("Expected vanishing", str(entry.expected.vanishing))
        table.add_row("Expected c1 vanishing", str(entry.expected.c1_vanishing))
        for key, value in entry.metadata.items():
            table.add_row(key, value)
        console.print(table)
    elif str(emit) == "-":
        click.echo(document.encode("yaml").decode(), nl=False)
    else:
        document.to_file(emit)
        console.print(f"Wrote {entry.name} to {emit}")


if __name__ == "__main__":
    main()
