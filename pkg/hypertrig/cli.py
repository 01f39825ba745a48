import sys
from pathlib import Path
from typing import Any, NoReturn, Optional, Type, TypeVar

import click
import pydantic
import structlog

from hypertrig import app_config as conf
from hypertrig import polynomial, solutions
from hypertrig.config import V1, Tolerances
from hypertrig.config_utils import get_report_for_invalid_document
from hypertrig.errors import HypertrigException, NotAHypergroup
from hypertrig.hypergroup import HFunction, Hypergroup, check_axioms
from hypertrig.logging import configure_logging
from hypertrig.scalars import Scalar, parse_complex_literal, scalar_to_json, to_float
from hypertrig.schemas import (
    ClassificationDocument,
    CounterexampleDocument,
    EvalDocument,
    FunctionSpec,
    NotAHypergroupDocument,
    RecurrenceSpec,
    TableFile,
    VerifyDocument,
    dumps,
    parse_document,
)

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

Document = TypeVar("Document", bound=pydantic.BaseModel)


class ComplexLiteral(click.ParamType):
    """`re` or `re+imi`, e.g. `2`, `0.5+0i`, `0+1i`, `1/2-3/4i`"""

    name = "complex"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Scalar:
        if not isinstance(value, str):
            return value  # type: ignore[no-any-return]
        try:
            return parse_complex_literal(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


COMPLEX = ComplexLiteral()
InputFile = click.Path(exists=True, dir_okay=False)


def _fail(message: str) -> NoReturn:
    logger.error("usage error", message=message)
    click.echo(message, err=True)
    sys.exit(EXIT_USAGE)


def _load(cls: Type[Document], path: str, kind: str) -> Document:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as e:
        _fail(f"cannot read {kind} {path}: {e}")
    parsed = parse_document(cls, text)
    if not isinstance(parsed, cls):
        _fail(get_report_for_invalid_document(parsed, kind, path))  # type: ignore[arg-type]
    return parsed


def _load_table(path: str) -> Hypergroup:
    document = _load(TableFile, path, "hypergroup table")
    try:
        return document.to_hypergroup()
    except HypertrigException as e:
        _fail(f"invalid hypergroup table in {path}: {e}")


def _load_function(path: str, H: Hypergroup, force_float: bool) -> HFunction:
    document = _load(FunctionSpec, path, "function spec")
    try:
        f = document.to_function(H, force_float=force_float)
        f.values(H.nmax)
    except HypertrigException as e:
        _fail(f"function spec {path} does not resolve on the table: {e}")
    return f


def _tolerances(ctx: click.Context, tol: Optional[float]) -> Tolerances:
    tolerances: Tolerances = ctx.obj["tolerances"]
    return tolerances if tol is None else tolerances.with_rtol(tol)


def _as_float(value: Scalar, force_float: bool) -> Scalar:
    return to_float(value) if force_float else value


@click.group()
@click.option(
    "--config",
    "config_path",
    type=InputFile,
    default=None,
    help="TOML file with a [tolerance] table (default: $HYPERTRIG_CONFIG)",
)
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str]) -> None:
    configure_logging(conf.LOGGING_LEVEL)
    try:
        tolerances = conf.load_tolerances(config_path)
    except conf.InvalidConfigFile as e:
        _fail(e.report)
    ctx.obj = {"tolerances": tolerances}


@cli.command(help="build the hypergroup table of a three-term recurrence")
@click.option("--spec", "spec_path", type=InputFile, required=True)
@click.option("--nmax", type=click.IntRange(min=0), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), required=True)
def table(spec_path: str, nmax: int, out_path: str) -> None:
    spec = _load(RecurrenceSpec, spec_path, "recurrence spec")
    try:
        recurrence = spec.to_recurrence()
        H = polynomial.polynomial_hypergroup(recurrence, nmax)
    except NotAHypergroup as e:
        logger.warning("not a hypergroup", recurrence=spec.name, n=e.n, m=e.m, k=e.k)
        click.echo(dumps(NotAHypergroupDocument.from_error(e)), nl=False)
        sys.exit(EXIT_NEGATIVE)
    except HypertrigException as e:
        _fail(f"cannot build table from {spec_path}: {e}")
    try:
        Path(out_path).write_text(dumps(TableFile.from_hypergroup(H)))
    except OSError as e:
        _fail(f"cannot write table to {out_path}: {e}")
    click.echo(dumps({"out": out_path, "nmax": nmax, "pairs": len(H.rows)}), nl=False)


@cli.command(help="check the hypergroup axioms of a table up to a depth")
@click.option("--table", "table_path", type=InputFile, required=True)
@click.option("--depth", type=click.IntRange(min=0), required=True)
@click.pass_context
def axioms(ctx: click.Context, table_path: str, depth: int) -> None:
    H = _load_table(table_path)
    if depth > H.nmax:
        _fail(f"depth {depth} exceeds nmax {H.nmax}")
    report = check_axioms(H, depth, ctx.obj["tolerances"])
    document = report.dict(by_alias=True)
    document["mode"] = report.mode.value
    document["pass"] = report.passed
    click.echo(dumps(document), nl=False)
    sys.exit(EXIT_OK if report.passed else EXIT_NEGATIVE)


@cli.command(name="eval", help="evaluate a polynomial family at one element")
@click.option("--spec", "spec_path", type=InputFile, required=True)
@click.option("--family", type=click.Choice(["exponential", "sine", "additive"]), required=True)
@click.option("--lambda", "lam", type=COMPLEX, required=True, help="lambda, or the constant of the additive family")
@click.option("--n", type=click.IntRange(min=0), required=True)
@click.option("--float", "force_float", is_flag=True, help="evaluate in float mode")
def eval_family(spec_path: str, family: str, lam: Scalar, n: int, force_float: bool) -> None:
    spec = _load(RecurrenceSpec, spec_path, "recurrence spec")
    lam = _as_float(lam, force_float)
    try:
        recurrence = spec.to_recurrence()
        if family == "exponential":
            value = polynomial.eval_poly(recurrence, n, lam)
        elif family == "sine":
            value = polynomial.eval_poly_derivative(recurrence, n, lam)
        else:
            value = polynomial.additive_fn(recurrence, lam)(n)
    except HypertrigException as e:
        _fail(f"cannot evaluate {family} family: {e}")
    document = EvalDocument(
        recurrence=recurrence.name,
        family=family,
        lambda_=scalar_to_json(lam),
        n=n,
        value=scalar_to_json(value),
    )
    click.echo(dumps(document), nl=False)


EQUATIONS = ["sine", "cosine", "exponential", "msine", "additive"]


@cli.command(help="compute the residual of a functional equation over every tabulated pair")
@click.option("--table", "table_path", type=InputFile, required=True)
@click.option("--equation", type=click.Choice(EQUATIONS), required=True)
@click.option("--f", "f_path", type=InputFile, required=True)
@click.option("--g", "g_path", type=InputFile, default=None, help="g, or m for msine")
@click.option("--tol", type=float, default=None, help="relative tolerance for float mode")
@click.option("--float", "force_float", is_flag=True, help="compare in float mode")
@click.pass_context
def verify(
    ctx: click.Context,
    table_path: str,
    equation: str,
    f_path: str,
    g_path: Optional[str],
    tol: Optional[float],
    force_float: bool,
) -> None:
    tolerances = _tolerances(ctx, tol)
    H = _load_table(table_path)
    f = _load_function(f_path, H, force_float)
    g: Optional[HFunction] = None
    if equation in ("sine", "cosine", "msine"):
        if g_path is None:
            raise click.UsageError(f"--g is required for the {equation} equation")
        g = _load_function(g_path, H, force_float)

    passed: Optional[bool] = None
    if equation == "sine":
        assert g is not None
        scan = solutions.scan_sine(H, f, g, tolerances)
    elif equation == "cosine":
        assert g is not None
        scan = solutions.scan_cosine(H, f, g, tolerances)
    elif equation == "exponential":
        scan = solutions.scan_exponential(H, f, tolerances)
        passed, _ = solutions.is_exponential(H, f, tolerances)
    elif equation == "msine":
        assert g is not None
        scan = solutions.scan_m_sine(H, f, g, tolerances)
        passed, _ = solutions.is_m_sine(H, f, g, tolerances)
    else:
        scan = solutions.scan_additive(H, f, tolerances)
    document = VerifyDocument.from_scan(equation, scan, passed)
    logger.info("verified", equation=equation, passed=document.passed, residual=str(scan.value))
    click.echo(dumps(document), nl=False)
    sys.exit(EXIT_OK if document.passed else EXIT_NEGATIVE)


@cli.command(help="classify a solution pair of the sine-cosine or cosine-sine equation")
@click.option("--table", "table_path", type=InputFile, required=True)
@click.option("--equation", type=click.Choice(["sine", "cosine"]), required=True)
@click.option("--f", "f_path", type=InputFile, required=True)
@click.option("--g", "g_path", type=InputFile, required=True)
@click.option("--tol", type=float, default=None, help="relative tolerance of the residual gate")
@click.pass_context
def classify(
    ctx: click.Context, table_path: str, equation: str, f_path: str, g_path: str, tol: Optional[float]
) -> None:
    tolerances = _tolerances(ctx, tol)
    H = _load_table(table_path)
    f = _load_function(f_path, H, False)
    g = _load_function(g_path, H, False)
    classifier = solutions.classify_sine if equation == "sine" else solutions.classify_cosine
    try:
        result = classifier(H, f, g, tolerances)
    except HypertrigException as e:
        _fail(f"classification failed: {e}")
    click.echo(dumps(ClassificationDocument.from_result(result)), nl=False)
    sys.exit(EXIT_NEGATIVE if result.case is solutions.CaseTag.NOT_A_SOLUTION else EXIT_OK)


@cli.command(help="show that n -> P_n'(lambda) is not const * P_n'(x0) * P_n(lambda)")
@click.option("--spec", "spec_path", type=InputFile, required=True)
@click.option("--lambda", "lam", type=COMPLEX, required=True)
@click.option("--nmax", type=click.IntRange(min=3), required=True)
@click.option("--float", "force_float", is_flag=True, help="evaluate in float mode")
@click.pass_context
def counterexample(ctx: click.Context, spec_path: str, lam: Scalar, nmax: int, force_float: bool) -> None:
    spec = _load(RecurrenceSpec, spec_path, "recurrence spec")
    try:
        report = polynomial.counterexample_report(
            spec.to_recurrence(), _as_float(lam, force_float), nmax
        )
    except HypertrigException as e:
        _fail(f"no counterexample report: {e}")
    demonstrated = report.demonstrated(ctx.obj["tolerances"])
    click.echo(dumps(CounterexampleDocument.from_report(report, demonstrated)), nl=False)
    sys.exit(EXIT_OK if demonstrated else EXIT_NEGATIVE)


@cli.command(help="generate the JSON schema for the tolerance config file")
def gen_conf_json_schema() -> None:
    click.echo(V1.schema_json(indent=2))


@cli.command(help="prints hypertrig's view of a tolerance config file")
@click.argument("config_path", type=InputFile)
def validate_config(config_path: str) -> None:
    try:
        tolerances = conf.load_tolerances(config_path)
    except conf.InvalidConfigFile as e:
        _fail(e.report)
    click.echo(V1(version=1, tolerance=tolerances).json(indent=2))
