"""Command-line front end.

Exit codes: 0 when every contract held, 1 for input errors, 2 for a contract or theorem violation, 3 when a
cap was exceeded. Reports go to stdout, diagnostics to stderr.
"""
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
import pydantic

from km_forge import errors, models
from km_forge.algebra import FiniteHeytingAlgebra, validate
from km_forge.density import delta_report, delta_table, dense_report, km_axiom_report
from km_forge.enrichment import commute_iso, free_one_generator, km_completion, one_step, one_step_report
from km_forge.formats import load_algebra, to_dot
from km_forge.omega import OmegaElement, remark_counterexample, verify_onestep_omega
from km_forge.stone import compare_with_onestep, open_statement_check, sigma_plus_report, spectrum
from km_forge.suites import verify_all
from km_forge.terms import check_schema

logger = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)
DELTA_FILL = "lightblue"


def _configure_logging(verbosity: int):
    logging.basicConfig(stream=sys.stderr, level=LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)],
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def _config(ctx: click.Context, inputs: Sequence[str] = (), **bounds) -> models.RunConfig:
    settings = ctx.find_root().obj
    try:
        return models.RunConfig(command=ctx.info_name, inputs=list(inputs), cap=settings["cap"],
                                output_format=settings["format"], verbosity=settings["verbosity"], **bounds)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        raise errors.InputError(f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}")


def _as_text(report: models.Report) -> str:
    lines = []
    for key, value in report.model_dump(mode="json", by_alias=True).items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _emit(config: models.RunConfig, report: models.Report, dot: Optional[str] = None) -> int:
    if config.output_format == models.OutputFormat.DOT and dot is not None:
        click.echo(dot)
    elif config.output_format == models.OutputFormat.TEXT:
        click.echo(_as_text(report))
    else:
        click.echo(report.to_json())
    return models.ExitCode.OK if report.passed else models.ExitCode.CONTRACT_VIOLATION


ALGEBRA = click.argument("algebra", type=click.Path(dir_okay=False))


@click.group()
@click.option("--cap", type=int, default=models.DEFAULT_CAP, show_default=True,
              help="Largest closure any construction may build.")
@click.option("--format", "output_format", type=click.Choice([f.value for f in models.OutputFormat]),
              default=models.OutputFormat.JSON.value, show_default=True)
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for construction details.")
@click.pass_context
def cli(ctx: click.Context, cap: int, output_format: str, verbose: int):
    """Finite Heyting algebras, least dense elements and their one-step enrichment."""
    _configure_logging(verbose)
    ctx.obj = {"cap": cap, "format": models.OutputFormat(output_format), "verbosity": verbose}


@cli.command("validate")
@ALGEBRA
@click.pass_context
def validate_command(ctx: click.Context, algebra: str):
    """Check an algebra file against the Heyting algebra axioms."""
    config = _config(ctx, [algebra])
    try:
        H = load_algebra(algebra)
    except errors.AlgebraValidationError as e:
        if e.report is None:
            raise
        _emit(config, e.report)
        return models.ExitCode.INPUT_ERROR
    return _emit(config, validate(H))


@cli.command()
@ALGEBRA
@click.option("-a", "anchor", help="Only this element.")
@click.pass_context
def delta(ctx: click.Context, algebra: str, anchor: Optional[str]):
    """Least dense element over every element."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    return _emit(config, delta_report(H, H.element(anchor) if anchor is not None else None))


@cli.command()
@ALGEBRA
@click.option("-a", "anchor", required=True)
@click.pass_context
def dense(ctx: click.Context, algebra: str, anchor: str):
    """Elements dense over one element, with the three characterizations of density."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    return _emit(config, dense_report(H, H.element(anchor)))


@cli.command("km-axioms")
@ALGEBRA
@click.option("--delta", "table", help="Comma-separated images of the elements in order.")
@click.pass_context
def km_axioms(ctx: click.Context, algebra: str, table: Optional[str]):
    """Check the KM identities for the least dense elements or a given table."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    values = None
    if table is not None:
        values = [H.element(ref.strip()) for ref in table.split(",")]
        if len(values) != H.n:
            raise errors.AlgebraFormatError(f"--delta needs {H.n} entries, got {len(values)}")
    return _emit(config, km_axiom_report(H, values))


@cli.command("one-step")
@ALGEBRA
@click.option("-a", "anchor", required=True)
@click.pass_context
def one_step_command(ctx: click.Context, algebra: str, anchor: str):
    """Adjoin the least dense element over one element."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    step = one_step(H, H.element(anchor), config.cap)
    Q = step.quotient
    dot = to_dot(Q, delta_table(Q), highlight={step.delta_class: DELTA_FILL})
    return _emit(config, one_step_report(step), dot=dot)


@cli.command()
@ALGEBRA
@click.option("--round-cap", type=int, default=8, show_default=True)
@click.pass_context
def km(ctx: click.Context, algebra: str, round_cap: int):
    """Enrich at every element until nothing changes."""
    config = _config(ctx, [algebra], round_cap=round_cap)
    H = load_algebra(algebra)
    completion = km_completion(H, config.round_cap, config.cap)
    return _emit(config, completion.report())


@cli.command()
@ALGEBRA
@click.pass_context
def free(ctx: click.Context, algebra: str):
    """The algebra H[i] generated by the constants and the identity map."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    E = free_one_generator(H, config.cap)
    report = models.FreeReport(algebra=H.describe(), size=E.size, generator=E.algebra.name(E.iota),
                               elements=[E.record(eta) for eta in range(E.size)])
    return _emit(config, report)


@cli.command("iso-commute")
@ALGEBRA
@click.option("-a", "first", required=True)
@click.option("-b", "second", required=True)
@click.pass_context
def iso_commute(ctx: click.Context, algebra: str, first: str, second: str):
    """The isomorphism between the two orders of enriching at a and at b."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    return _emit(config, commute_iso(H, H.element(first), H.element(second), config.cap).report())


@cli.group()
def omega():
    """The chain 0 < ... < 1/3 < 1/2 < 1."""


@omega.command()
@click.option("--n0", type=int, required=True)
@click.pass_context
def demo(ctx: click.Context, n0: int):
    """Show the constant 1/n0 collapsing to 1 once 1/(n + n0) is treated as dense."""
    config = _config(ctx)
    return _emit(config, remark_counterexample(n0))


@omega.command("verify")
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--constant", "constants", multiple=True, help="Extra constant such as 1/7.")
@click.pass_context
def omega_verify(ctx: click.Context, depth: int, constants: Sequence[str]):
    """One-step checks on the terms in iota and constants up to a depth."""
    config = _config(ctx, depth=depth)
    extra = [OmegaElement.parse(c).idx for c in constants]
    return _emit(config, verify_onestep_omega(config.depth, extra))


@cli.command("spec")
@ALGEBRA
@click.pass_context
def spec_command(ctx: click.Context, algebra: str):
    """Prime filters and the Stone map."""
    config = _config(ctx, [algebra])
    return _emit(config, spectrum(load_algebra(algebra)).report())


@cli.command("sigma-plus")
@ALGEBRA
@click.option("-a", "anchor", required=True)
@click.pass_context
def sigma_plus_command(ctx: click.Context, algebra: str, anchor: str):
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    return _emit(config, sigma_plus_report(H, H.element(anchor)))


@cli.command("compare-muravitsky")
@ALGEBRA
@click.option("-a", "anchor", required=True)
@click.pass_context
def compare_muravitsky(ctx: click.Context, algebra: str, anchor: str):
    """Compare the enrichment with the subalgebra of up-sets generated by sigma(a)+."""
    config = _config(ctx, [algebra])
    H = load_algebra(algebra)
    return _emit(config, compare_with_onestep(H, H.element(anchor), config.cap))


@cli.command("open-statement")
@ALGEBRA
@click.option("-a", "anchor", required=True)
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--nvars", type=int, default=2, show_default=True)
@click.pass_context
def open_statement(ctx: click.Context, algebra: str, anchor: str, depth: int, nvars: int):
    """Search for counterexamples to the sigma(a)+ statement within the bounds."""
    config = _config(ctx, [algebra], depth=depth, nvars=nvars)
    H = load_algebra(algebra)
    return _emit(config, open_statement_check(H, H.element(anchor), config.depth, config.nvars))


@cli.command()
@ALGEBRA
@click.option("--schema", "schema_id", required=True, type=click.Choice([s.value for s in models.SchemaId]))
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--nvars", type=int, default=2, show_default=True)
@click.pass_context
def schema(ctx: click.Context, algebra: str, schema_id: str, depth: int, nvars: int):
    """Check one schema exhaustively within the bounds."""
    config = _config(ctx, [algebra], depth=depth, nvars=nvars)
    H = load_algebra(algebra)
    return _emit(config, check_schema(schema_id, H, config.bounds))


@cli.command("verify-all")
@click.option("--poset-max", type=int, default=3, show_default=True)
@click.option("--chain-max", type=int, default=4, show_default=True)
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--nvars", type=int, default=2, show_default=True)
@click.option("--round-cap", type=int, default=8, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--suite", "suites", multiple=True, type=click.Choice([s.value for s in models.SuiteName]),
              help="Run only these suites.")
@click.pass_context
def verify_all_command(ctx: click.Context, poset_max: int, chain_max: int, depth: int, nvars: int, round_cap: int,
                       jobs: int, suites: Sequence[str]):
    """Run every property suite over the catalog of small algebras."""
    config = _config(ctx, poset_max=poset_max, chain_max=chain_max, depth=depth, nvars=nvars, round_cap=round_cap,
                     jobs=jobs)
    return _emit(config, verify_all(config, [models.SuiteName(s) for s in suites]))


@cli.command("export-dot")
@ALGEBRA
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
@click.option("--delta/--no-delta", "with_delta", default=True, show_default=True,
              help="Draw edges to the least dense elements.")
@click.pass_context
def export_dot(ctx: click.Context, algebra: str, output: Optional[str], with_delta: bool):
    """Hasse diagram of an algebra in DOT."""
    _config(ctx, [algebra])
    H = load_algebra(algebra)
    dot = to_dot(H, delta_table(H) if with_delta else None)
    if output is None:
        click.echo(dot)
    else:
        try:
            Path(output).write_text(dot, encoding="utf-8")
        except OSError as e:
            raise errors.AlgebraIOError(f"cannot write {output}: {e.strerror or e}")
    return models.ExitCode.OK


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="km-forge", standalone_mode=False)
    except errors.KMForgeError as e:
        click.echo(f"error: {e}", err=True)
        return int(e.exit_code)
    except click.exceptions.Exit as e:
        return int(e.exit_code)
    except (click.ClickException, click.exceptions.Abort) as e:
        click.echo(f"error: {e.format_message() if isinstance(e, click.ClickException) else 'aborted'}", err=True)
        return int(models.ExitCode.INPUT_ERROR)
    return int(code or models.ExitCode.OK)


def run():
    sys.exit(main())
