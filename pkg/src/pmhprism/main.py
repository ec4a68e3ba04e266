"""
pmhprism - command-line entry point.

Record streams go to stdout (JSON lines or CSV); logging and error messages
go to stderr through rich.
"""

import functools
import logging
import sys
from typing import Any, Callable, List, Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler

from pmhprism import __version__
from pmhprism.config import RunConfig, get_config
from pmhprism.constructive import (
    extend_crossed_prism,
    witness_crossed_prism_odd,
    witness_prism,
)
from pmhprism.errors import ErrorCategory, PmhError, UsageError
from pmhprism.export import format_edge_list, parse_edge_list, to_dot
from pmhprism.families import (
    CROSSED_PRISM,
    FAMILIES,
    FIXTURES,
    PRISM,
    CrossedPrismGraph,
    build_family,
    build_graph,
)
from pmhprism.graph import (
    EdgeSet,
    Graph,
    PerfectMatching,
    as_perfect_matching,
    cycle_decomposition,
)
from pmhprism.matching import (
    check_pmh,
    count_by_cut,
    enumerate_perfect_matchings,
    find_extension,
    proposition_e2f_check,
)
from pmhprism.performance import ResourceBudget, get_performance_profiler
from pmhprism.reports import InstanceRecord, RunReport, pmh_record, verify_theorems

err_console = Console(stderr=True)

logger = logging.getLogger("pmhprism")

USAGE_CATEGORIES = {
    ErrorCategory.USAGE,
    ErrorCategory.PARAMETER,
    ErrorCategory.MALFORMED_INPUT,
    ErrorCategory.CASE,
    ErrorCategory.CLASSIFICATION,
}


def setup_logging(verbose: bool) -> None:
    """Route package logging to stderr through rich."""
    handler = RichHandler(console=err_console, show_path=False, show_time=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.handlers = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


class RunContext:
    """Settings shared by every subcommand of one invocation."""

    def __init__(self, config: RunConfig, timings: bool):
        self.config = config
        self.timings = timings

    def budget(self, operation: str) -> ResourceBudget:
        return ResourceBudget(
            self.config.timeout_s, self.config.matching_cap, operation=operation
        )


def emit(report: RunReport, as_csv: bool) -> None:
    click.echo(report.to_csv() if as_csv else report.to_jsonl(), nl=False)


def fail(error: PmhError) -> None:
    err_console.print(f"[red]Error:[/red] {error}")
    err_console.print_json(data=error.to_dict(), indent=None)
    sys.exit(2 if error.category in USAGE_CATEGORIES else 1)


def handle_errors(func: Callable) -> Callable:
    """Turn library errors into a red message and a non-zero exit code."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except PmhError as e:
            fail(e)

    return wrapper


def family_option(choices: Sequence[str] = FAMILIES) -> Callable:
    return click.option(
        "--family",
        type=click.Choice(list(choices)),
        required=True,
        help="Graph family (fixtures ignore --n)",
    )


n_option = click.option("--n", "n", type=int, default=0, help="Family parameter")
format_option = click.option(
    "--json/--csv", "as_json", default=True, help="Record format (default JSON lines)"
)


def _timed(ctx: RunContext, elapsed_s: Optional[float]) -> Optional[float]:
    if not ctx.timings or elapsed_s is None:
        return None
    return round(elapsed_s * 1000, 3)


def _last_elapsed(operation: str) -> Optional[float]:
    metrics = get_performance_profiler().last(operation)
    return metrics.duration if metrics else None


def _report(
    command: str, family: str, n: int, records: List[InstanceRecord]
) -> RunReport:
    return RunReport(command=command, family=family, n_range=(n, n), records=records)


def _matching_arg(g: Graph, text: str) -> PerfectMatching:
    return as_perfect_matching(g, parse_edge_list(g, text))


def _crossed(family: str, n: int) -> Optional[CrossedPrismGraph]:
    if family != CROSSED_PRISM:
        return None
    built = build_family(family, n)
    assert isinstance(built, CrossedPrismGraph)
    return built


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr")
@click.option("--timeout-s", type=float, default=None, help="Per-instance timeout")
@click.option("--matching-cap", type=int, default=None, help="Matching-count cap")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.option("--seed", type=int, default=None, help="Reserved; currently unused")
@click.option("--timings", is_flag=True, help="Include elapsed_ms in records")
@click.version_option(version=__version__)
@click.pass_context
def main(
    click_ctx: click.Context,
    verbose: bool,
    timeout_s: Optional[float],
    matching_cap: Optional[int],
    jobs: Optional[int],
    seed: Optional[int],
    timings: bool,
) -> None:
    """PMH checks and constructions for prism and crossed prism graphs."""
    setup_logging(verbose)
    if seed is not None:
        logger.debug(f"--seed {seed} accepted; no command consumes randomness")
    try:
        config = get_config().with_overrides(timeout_s, matching_cap, jobs)
    except PmhError as e:
        fail(e)
    click_ctx.obj = RunContext(config, timings)


@main.command()
@family_option()
@n_option
@format_option
@click.pass_obj
@handle_errors
def generate(ctx: RunContext, family: str, n: int, as_json: bool) -> None:
    """Build a family member and print its edges."""
    g = build_graph(family, n)
    details = {
        "order": g.order,
        "size": g.size,
        "cubic": g.is_cubic(),
        "edges": g.edge_names(range(g.size)),
    }
    cp = _crossed(family, n)
    if cp is not None:
        details["cut"] = {k: g.edge_name(e) for k, e in cp.cut.as_dict().items()}
    record = InstanceRecord(
        command="generate", family=family, n=n or None, details=details
    )
    emit(_report("generate", family, n, [record]), not as_json)


@main.command("enumerate")
@family_option()
@n_option
@click.option("--list", "list_all", is_flag=True, help="One record per matching")
@format_option
@click.pass_obj
@handle_errors
def enumerate_cmd(
    ctx: RunContext, family: str, n: int, list_all: bool, as_json: bool
) -> None:
    """Count (or list) the perfect matchings."""
    g = build_graph(family, n)
    records: List[InstanceRecord] = []
    operation = f"enumerate {family} {n}"
    count = 0
    with get_performance_profiler().profile_operation(operation):
        for m in enumerate_perfect_matchings(g, ctx.budget(operation)):
            count += 1
            if list_all:
                records.append(
                    InstanceRecord(
                        command="enumerate",
                        family=family,
                        n=n or None,
                        details={"index": count, "edges": g.edge_names(m)},
                    )
                )
    details = {}
    cp = _crossed(family, n)
    if cp is not None:
        details["by_cut_size"] = {
            str(k): v for k, v in count_by_cut(cp, ctx.budget(operation)).items()
        }
    records.append(
        InstanceRecord(
            command="enumerate",
            family=family,
            n=n or None,
            matchings_count=count,
            details=details,
            elapsed_ms=_timed(ctx, _last_elapsed(operation)),
        )
    )
    emit(_report("enumerate", family, n, records), not as_json)


@main.command("check-pmh")
@family_option()
@n_option
@format_option
@click.pass_obj
@handle_errors
def check_pmh_cmd(ctx: RunContext, family: str, n: int, as_json: bool) -> None:
    """Exhaustively decide the PMH property."""
    g = build_graph(family, n)
    operation = f"check-pmh {family} {n}"
    with get_performance_profiler().profile_operation(operation):
        verdict = check_pmh(g, ctx.budget(operation), jobs=ctx.config.jobs)
    record = pmh_record("check-pmh", family, n or None, g, verdict)
    record = record.model_copy(
        update={"elapsed_ms": _timed(ctx, _last_elapsed(operation))}
    )
    emit(_report("check-pmh", family, n, [record]), not as_json)


@main.command()
@family_option()
@n_option
@format_option
@click.pass_obj
@handle_errors
def e2f(ctx: RunContext, family: str, n: int, as_json: bool) -> None:
    """Compare 3-edge-colouring extendability with even 2-factors."""
    g = build_graph(family, n)
    operation = f"e2f {family} {n}"
    verdict = proposition_e2f_check(g, ctx.budget(operation))
    record = InstanceRecord(
        command="e2f",
        family=family,
        n=n or None,
        status="pass" if verdict.consistent else "fail",
        verdict="consistent" if verdict.consistent else "inconsistent",
        matchings_count=verdict.matchings_examined,
        details={
            "every_pm_extends": verdict.every_pm_extends,
            "all_two_factors_even": verdict.all_two_factors_even,
            "vacuous": verdict.vacuous,
        },
    )
    emit(_report("e2f", family, n, [record]), not as_json)
    if not verdict.consistent:
        sys.exit(1)


@main.command()
@family_option()
@n_option
@click.option("--matching", required=True, help="Edge list like 'u1-u2 v1-v2' or @file")
@click.option(
    "--search", is_flag=True, help="Exhaustive search, not the case construction"
)
@format_option
@click.pass_obj
@handle_errors
def extend(
    ctx: RunContext, family: str, n: int, matching: str, search: bool, as_json: bool
) -> None:
    """Extend a perfect matching to a Hamiltonian cycle."""
    g = build_graph(family, n)
    m = _matching_arg(g, matching)
    details: dict = {}
    cp = _crossed(family, n)
    if search or cp is None:
        found = find_extension(g, m)
        if found is None:
            record = InstanceRecord(
                command="extend",
                family=family,
                n=n or None,
                verdict="no-extension",
                witness_edges=g.edge_names(m),
            )
            emit(_report("extend", family, n, [record]), not as_json)
            sys.exit(1)
        details["extension"] = g.edge_names(found)
        cycle = cycle_decomposition(g, m.edges | found.edges)[0].vertices
    else:
        result = extend_crossed_prism(cp, m)
        details["extension"] = g.edge_names(result.extension)
        details["trace"] = result.trace.to_dict()
        if result.partner is not None:
            details["partner"] = g.edge_names(result.partner)
        cycle = result.hamiltonian_cycle
    details["hamiltonian_cycle"] = [g.label_of(x) for x in cycle]
    record = InstanceRecord(
        command="extend",
        family=family,
        n=n or None,
        verdict="extended",
        details=details,
    )
    emit(_report("extend", family, n, [record]), not as_json)


def _witness(family: str, n: int) -> PerfectMatching:
    if family == PRISM:
        return witness_prism(n)
    return witness_crossed_prism_odd(n)


@main.command()
@family_option([PRISM, CROSSED_PRISM])
@n_option
@format_option
@click.pass_obj
@handle_errors
def witness(ctx: RunContext, family: str, n: int, as_json: bool) -> None:
    """Print the candidate non-PMH witness matching."""
    g = build_graph(family, n)
    m = _witness(family, n)
    extendable = find_extension(g, m) is not None
    record = InstanceRecord(
        command="witness",
        family=family,
        n=n,
        verdict="extendable" if extendable else "inextensible",
        witness_edges=g.edge_names(m),
    )
    emit(_report("witness", family, n, [record]), not as_json)


@main.command("verify-theorems")
@click.option("--n-max-prism", "--n-max", "n_max_prism", type=int, default=12)
@click.option("--n-max-crossed", type=int, default=4)
@format_option
@click.pass_obj
@handle_errors
def verify_theorems_cmd(
    ctx: RunContext, n_max_prism: int, n_max_crossed: int, as_json: bool
) -> None:
    """Check prisms and crossed prisms against the verdict table."""
    if n_max_prism < 3 or n_max_crossed < 1:
        raise UsageError("--n-max-prism must be >= 3 and --n-max-crossed >= 1")
    report = verify_theorems(n_max_prism, n_max_crossed, ctx.config, ctx.timings)
    emit(report, not as_json)
    for record in report.skipped:
        err_console.print(
            f"[yellow]Skipped[/yellow] {record.family} n={record.n}: "
            f"{record.skip_reason}"
        )
    failure = report.first_failure
    if failure is not None:
        err_console.print(
            f"[red]Verdict mismatch[/red] {failure.family} n={failure.n}: "
            f"got {failure.verdict}, expected {failure.expected}"
        )
        sys.exit(1)


@main.command("export-dot")
@family_option()
@n_option
@click.option("--matching", default=None, help="Edges to draw bold (list or @file)")
@click.option("--witness", "use_witness", is_flag=True, help="Draw the witness")
@click.pass_obj
@handle_errors
def export_dot(
    ctx: RunContext,
    family: str,
    n: int,
    matching: Optional[str],
    use_witness: bool,
) -> None:
    """Write DOT text; cut edges of crossed prisms are coloured."""
    g = build_graph(family, n)
    highlight: Optional[EdgeSet] = None
    if matching is not None:
        highlight = parse_edge_list(g, matching)
    elif use_witness:
        if family in FIXTURES:
            raise UsageError("--witness applies to prism and crossed-prism only")
        highlight = _witness(family, n).edges
    cut = None
    cp = _crossed(family, n)
    if cp is not None:
        cut = cp.cut_set()
    if highlight is not None:
        logger.debug(f"Highlighting {format_edge_list(g, highlight)}")
    click.echo(to_dot(g, highlight, cut), nl=False)


if __name__ == "__main__":
    main()
