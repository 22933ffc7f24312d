"""
Command-line interface using Typer

Every command prints one JSON ``RunReport`` on stdout (or a rich rendering
with ``--pretty``). Failures print a JSON error object and exit with the
error's code: 2 validation, 3 numerical/reconstruction, 4 not Frobenius,
1 for anything unexpected.
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import typer
from rich import print as rprint
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from symprod.core.frobenius import (
    degree_search,
    phi_inductive,
    phi_partition,
    phi_permutation,
)
from symprod.core.partitions import verify_pairing_identity
from symprod.core.reconstruct import decompose
from symprod.documents import (
    DecompositionOutput,
    FunctionalDocument,
    RunReport,
    inputs_digest,
    load_functional_document,
    load_ideal,
)
from symprod.polyalg.functional import FiniteElement, FiniteFunctional, Functional
from symprod.polyalg.parser import parse_polynomial
from symprod.polyalg.scalar import ScalarContext, ScalarMode
from symprod.utils.config import SymprodConfig
from symprod.utils.errors import InternalError, SymprodError, ValidationError
from symprod.utils.performance import PerformanceTimer

app = typer.Typer(
    name="symprod",
    help="Frobenius n-homomorphisms: transformations, certificates and point recovery",
    add_completion=False,
    rich_markup_mode="rich",
)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)


class Method(str, Enum):
    """Which definition of Phi to evaluate"""

    PERM = "perm"
    PART = "part"
    IND = "ind"
    ALL = "all"


# Shared options
InputOption = typer.Option(..., "--input", "-i", help="Functional document (JSON)")
ModeOption = typer.Option(None, "--mode", help="Scalar mode: exact or float")
PrecisionOption = typer.Option(None, "--precision", help="Float precision in bits")
TolOption = typer.Option(None, "--tol", help="Float-mode vanishing tolerance")
ThreadsOption = typer.Option(None, "--threads", help="Worker threads for enumeration")
PrettyOption = typer.Option(False, "--pretty", help="Human-readable output")
TimingOption = typer.Option(False, "--timing", help="Include wall-clock timing")
ConfigOption = typer.Option(None, "--config", help="Configuration file (JSON)")


@dataclass
class RunSettings:
    """Configuration with command-line overrides applied"""

    config: SymprodConfig
    context: ScalarContext
    pretty: bool
    timing: bool

    @property
    def threads(self) -> int:
        return self.config.threads


def configure_logging(level: str) -> None:
    """Send log records to stderr so stdout stays valid JSON"""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def load_settings(
    config_file: Optional[str],
    mode: Optional[ScalarMode],
    precision: Optional[int],
    tol: Optional[float],
    threads: Optional[int],
    pretty: bool,
    timing: bool,
) -> RunSettings:
    config = SymprodConfig.load(config_file)
    if mode is not None:
        config.scalars.mode = ScalarMode(mode).value
    if precision is not None:
        config.scalars.precision = precision
    if tol is not None:
        config.scalars.tolerance = tol
    if threads is not None:
        config.threads = threads
    config._validate()
    configure_logging(config.log_level)
    context = ScalarContext(
        ScalarMode(config.scalars.mode),
        config.scalars.precision,
        config.scalars.tolerance,
    )
    return RunSettings(config, context, pretty, timing)


def emit_error(error: SymprodError, pretty: bool) -> None:
    if pretty:
        err_console.print(f"[red]❌ {type(error).__name__}: {error.message}[/red]")
    typer.echo(json.dumps({"error": error.to_dict()}, sort_keys=True, default=str))


def run_command(
    command: str,
    settings_factory: Callable[[], RunSettings],
    inputs: Callable[[RunSettings], Dict[str, Any]],
    compute: Callable[[RunSettings], Dict[str, Any]],
    render: Callable[[RunReport], None],
    pretty: bool,
) -> RunReport:
    """Shared driver: settings, compute, report, errors and exit codes"""
    try:
        settings = settings_factory()
        with PerformanceTimer(f"cli.{command}") as timer:
            outputs = compute(settings)
        report = RunReport(
            command=command,
            inputs_digest=inputs_digest(inputs(settings)),
            outputs=outputs,
            scalar_mode=settings.context.mode,
            tolerances=settings.config.tolerances(),
            timing={"seconds": timer.duration or 0.0} if settings.timing else None,
        )
    except SymprodError as e:
        emit_error(e, pretty)
        raise typer.Exit(code=e.exit_code)
    except Exception as e:
        logger.exception("Unexpected failure in %s", command)
        error = InternalError(
            f"Unexpected {type(e).__name__}: {e}", {"command": command}
        )
        emit_error(error, pretty)
        raise typer.Exit(code=error.exit_code) from e

    if pretty:
        render(report)
    else:
        typer.echo(report.to_json())
    return report


def parse_argument(text: str, f: Functional, context: ScalarContext) -> Any:
    """
    An algebra element from the command line

    Moment functionals take polynomials in u1..um. Finite functionals take
    ``1``/``one`` for the unit, a label for its indicator, or a
    comma-separated value vector.
    """
    if not isinstance(f, FiniteFunctional):
        return parse_polynomial(text, f.num_vars, context)
    stripped = text.strip()
    if stripped in f.point_labels:
        return f.indicator(stripped)
    if stripped.lower() in ("1", "one"):
        return f.unit()
    pieces = [p.strip() for p in stripped.split(",")]
    if len(pieces) != len(f.point_labels):
        raise ValidationError(
            f"Cannot read {text!r} as an element: expected a label, 1, or "
            f"{len(f.point_labels)} comma-separated values"
        )
    return FiniteElement(f.point_labels, [context.from_json(p) for p in pieces], context)


def _document_inputs(document: FunctionalDocument) -> Dict[str, Any]:
    return document.model_dump(mode="json")


@app.command("phi")
def phi_command(
    args: List[str] = typer.Argument(..., help="Arguments a1 ... ak"),
    input_file: str = InputOption,
    method: Method = typer.Option(Method.PART, "--method", "-m", help="perm, part, ind or all"),
    mode: Optional[ScalarMode] = ModeOption,
    precision: Optional[int] = PrecisionOption,
    tol: Optional[float] = TolOption,
    pretty: bool = PrettyOption,
    timing: bool = TimingOption,
    config_file: Optional[str] = ConfigOption,
):
    """Evaluate Phi_k(f)(a1, ..., ak)"""
    state: Dict[str, Any] = {}

    def settings() -> RunSettings:
        return load_settings(config_file, mode, precision, tol, None, pretty, timing)

    def compute(s: RunSettings) -> Dict[str, Any]:
        document = load_functional_document(input_file)
        state["document"] = document
        f = document.to_functional(s.context)
        elements = [parse_argument(a, f, s.context) for a in args]
        limits = s.config.limits
        evaluators = {
            Method.PERM: lambda: phi_permutation(
                f, elements, limit=limits.permutation_limit
            ),
            Method.PART: lambda: phi_partition(
                f, elements, limit=limits.partition_limit
            ),
            Method.IND: lambda: phi_inductive(
                f, elements, limit=limits.inductive_limit
            ),
        }
        chosen = [Method.PERM, Method.PART, Method.IND] if method == Method.ALL else [method]
        values = {m.value: evaluators[m]() for m in chosen}
        outputs: Dict[str, Any] = {
            "k": len(elements),
            "values": {name: s.context.to_json(v) for name, v in values.items()},
        }
        if method == Method.ALL:
            first = values[Method.PART.value]
            outputs["methods_agree"] = all(
                s.context.close(v, first, s.context.magnitude(first)) for v in values.values()
            )
        return outputs

    def inputs(s: RunSettings) -> Dict[str, Any]:
        return {"document": _document_inputs(state["document"]), "args": args, "method": method.value}

    def render(report: RunReport) -> None:
        table = Table(title=f"Phi_{report.outputs['k']}(f)")
        table.add_column("Method", style="bold")
        table.add_column("Value", justify="right")
        for name, value in report.outputs["values"].items():
            table.add_row(name, _format_json_scalar(value))
        console.print(table)
        if "methods_agree" in report.outputs:
            agree = str(report.outputs["methods_agree"]).lower()
            color = "green" if report.outputs["methods_agree"] else "red"
            rprint(f"[{color}]methods agree: {agree}[/{color}]")

    run_command("phi", settings, inputs, compute, render, pretty)


@app.command("degree")
def degree_command(
    input_file: str = InputOption,
    max_n: int = typer.Option(8, "--max-n", help="Largest degree to consider"),
    degree_bound: Optional[int] = typer.Option(
        None, "--degree-bound", "-D", help="Monomial degree bound for moment tables"
    ),
    mode: Optional[ScalarMode] = ModeOption,
    precision: Optional[int] = PrecisionOption,
    tol: Optional[float] = TolOption,
    threads: Optional[int] = ThreadsOption,
    pretty: bool = PrettyOption,
    timing: bool = TimingOption,
    config_file: Optional[str] = ConfigOption,
):
    """Find the n for which f is a Frobenius n-homomorphism"""
    state: Dict[str, Any] = {}

    def settings() -> RunSettings:
        return load_settings(config_file, mode, precision, tol, threads, pretty, timing)

    def compute(s: RunSettings) -> Dict[str, Any]:
        document = load_functional_document(input_file)
        state["document"] = document
        f = document.to_functional(s.context)
        search = degree_search(
            f,
            max_n,
            degree_bound,
            threads=s.threads,
            partition_limit=s.config.limits.partition_limit,
        )
        certificates = [c.to_dict(s.context) for c in search.certificates]
        if search.degree is not None:
            message = f"Frobenius {search.degree}-homomorphism, {certificates[0]['scope']}"
        else:
            message = f"not Frobenius for any n <= {max_n}"
        return {
            "degree": search.degree,
            "f1": s.context.to_json(f.unit_value),
            "max_n": max_n,
            "certificates": certificates,
            "reason": search.reason,
            "message": message,
        }

    def inputs(s: RunSettings) -> Dict[str, Any]:
        return {
            "document": _document_inputs(state["document"]),
            "max_n": max_n,
            "degree_bound": degree_bound,
        }

    def render(report: RunReport) -> None:
        out = report.outputs
        color = "green" if out["degree"] is not None else "yellow"
        body = f"[bold]f(1):[/bold] {_format_json_scalar(out['f1'])}\n"
        body += f"[bold]Result:[/bold] [{color}]{out['message']}[/{color}]"
        if out["reason"]:
            body += f"\n[bold]Reason:[/bold] {out['reason']}"
        console.print(Panel(body, title="Frobenius degree", border_style="blue"))

    run_command("degree", settings, inputs, compute, render, pretty)


@app.command("decompose")
def decompose_command(
    input_file: str = InputOption,
    n: int = typer.Option(..., "--n", "-n", help="Degree n of the homomorphism"),
    ideal_file: Optional[str] = typer.Option(None, "--ideal", help="Ideal document (JSON)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Separating-form seed"),
    mode: Optional[ScalarMode] = ModeOption,
    precision: Optional[int] = PrecisionOption,
    tol: Optional[float] = TolOption,
    pretty: bool = PrettyOption,
    timing: bool = TimingOption,
    config_file: Optional[str] = ConfigOption,
):
    """Recover the points and multiplicities of a Frobenius n-homomorphism"""
    state: Dict[str, Any] = {}

    def settings() -> RunSettings:
        return load_settings(config_file, mode, precision, tol, None, pretty, timing)

    def compute(s: RunSettings) -> Dict[str, Any]:
        document = load_functional_document(input_file)
        state["document"] = document
        f = document.to_functional(s.context)
        generators = load_ideal(ideal_file, s.context) if ideal_file else None
        state["ideal"] = [str(g) for g in generators or []]
        rc = s.config.reconstruction
        state["seed"] = rc.seed if seed is None else seed
        report = decompose(
            f,
            n,
            generators,
            seed=state["seed"],
            max_retries=rc.max_retries,
            cluster_tolerance=rc.cluster_tolerance,
            multiplicity_tolerance=rc.multiplicity_tolerance,
            verify_tolerance=rc.verify_tolerance,
            max_steps=rc.root_max_steps,
            extra_precision=rc.root_extra_precision,
        )
        return DecompositionOutput.model_validate(report.to_dict()).model_dump(mode="json")

    def inputs(s: RunSettings) -> Dict[str, Any]:
        return {
            "document": _document_inputs(state["document"]),
            "n": n,
            "ideal": state.get("ideal", []),
            "seed": state.get("seed"),
        }

    def render(report: RunReport) -> None:
        out = report.outputs
        table = Table(title=f"Points ({out['size']} with multiplicity)")
        table.add_column("Point", style="bold")
        table.add_column("Multiplicity", justify="right")
        for entry in out["points"]:
            point = entry["point"]
            shown = point if isinstance(point, str) else (
                "(" + ", ".join(_format_json_scalar(x) for x in point) + ")"
            )
            table.add_row(shown, str(entry["multiplicity"]))
        console.print(table)
        rprint(f"residual: {out['residual']}  retries: {out['retries']}")

    run_command("decompose", settings, inputs, compute, render, pretty)


@app.command("verify-identity")
def verify_identity_command(
    left: int = typer.Argument(..., help="Size of X"),
    right: int = typer.Argument(..., help="Size of Y"),
    threads: Optional[int] = ThreadsOption,
    pretty: bool = PrettyOption,
    timing: bool = TimingOption,
    config_file: Optional[str] = ConfigOption,
):
    """Check the partial-pairing identity for chi on sets of the given sizes"""

    def settings() -> RunSettings:
        return load_settings(config_file, None, None, None, threads, pretty, timing)

    def compute(s: RunSettings) -> Dict[str, Any]:
        limits = s.config.limits
        result = verify_pairing_identity(
            left,
            right,
            limit=limits.pairing_limit,
            partition_limit=limits.partition_limit,
            threads=s.threads,
        )
        return result.to_dict()

    def inputs(s: RunSettings) -> Dict[str, Any]:
        return {"left": left, "right": right}

    def render(report: RunReport) -> None:
        out = report.outputs
        color = "green" if out["equal"] else "red"
        body = (
            f"[bold]Sizes:[/bold] ({out['left']}, {out['right']})\n"
            f"[bold]Partial pairings:[/bold] {out['pairings']}\n"
            f"[bold]Terms:[/bold] {out['lhs_terms']} / {out['rhs_terms']}\n"
            f"[bold]Equal:[/bold] [{color}]{str(out['equal']).lower()}[/{color}]"
        )
        if out["first_difference"]:
            body += f"\n[bold]First difference:[/bold] {out['first_difference']}"
        console.print(Panel(body, title="Pairing identity", border_style="blue"))

    run_command("verify-identity", settings, inputs, compute, render, pretty)


@app.command("selfcheck")
def selfcheck_command(
    full: bool = typer.Option(False, "--full", help="Run every criterion at full size"),
    seed: int = typer.Option(0, "--seed", help="Seed for the random cases"),
    mode: Optional[ScalarMode] = ModeOption,
    precision: Optional[int] = PrecisionOption,
    tol: Optional[float] = TolOption,
    pretty: bool = PrettyOption,
    timing: bool = TimingOption,
    config_file: Optional[str] = ConfigOption,
):
    """Run the bundled acceptance checks"""
    from symprod.selfcheck import run_selfcheck

    def settings() -> RunSettings:
        return load_settings(config_file, mode, precision, tol, None, pretty, timing)

    def compute(s: RunSettings) -> Dict[str, Any]:
        results = run_selfcheck(s.config, s.context, full=full, seed=seed)
        return {
            "passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results],
        }

    def inputs(s: RunSettings) -> Dict[str, Any]:
        return {"full": full, "seed": seed}

    def render(report: RunReport) -> None:
        table = Table(title="Self-check")
        table.add_column("Check", style="bold")
        table.add_column("Result", justify="center")
        table.add_column("Detail")
        for check in report.outputs["checks"]:
            result = "[green]pass[/green]" if check["passed"] else "[red]FAIL[/red]"
            table.add_row(check["name"], result, check["detail"])
        console.print(table)

    report = run_command("selfcheck", settings, inputs, compute, render, pretty)
    if not report.outputs["passed"]:
        raise typer.Exit(code=1)


def _format_json_scalar(value: Any) -> str:
    if not isinstance(value, dict):
        return str(value)
    re, im = value.get("re", 0), value.get("im", 0)
    if im in (0, "0", 0.0):
        return str(re)
    return f"{re}{'' if str(im).startswith('-') else '+'}{im}i"


def main():
    """Main CLI entry point"""
    app()


if __name__ == "__main__":
    main()
