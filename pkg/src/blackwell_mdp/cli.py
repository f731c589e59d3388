"""Command-line interface for the Blackwell toolkit.

Every command loads an instance file, runs one analysis and emits a report
through the renderer chosen with --format. Toolkit errors become exit codes
(2 parse, 3 domain, 4 resource guard, 1 configuration).
"""

import logging
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import click
from rich.console import Console
from rich.logging import RichHandler

from .config import ConfigError, load_config
from .core.average import average_optimal_policies
from .core.blackwell import BlackwellAnalysis, blackwell_optimal_policy, eta_bound, exact_blackwell_analysis, reduction_gamma
from .core.exact_linear import check_gamma, value_function
from .core.generators import (
    IntervalSpec,
    example_one,
    interval_instance,
    random_instance,
    random_uncertainty,
)
from .core.robust import (
    Norm,
    robust_blackwell_analysis,
    robust_blackwell_optimal_policy,
    robust_eta_bound,
    robust_value_iteration,
)
from .core.roots import IsolatedRoot
from .core.solvers import exact_policy_iteration, float_value_iteration, optimal_policy_set
from .errors import BlackwellError, InstanceFormatError
from .model.instance_io import canonical_json, instance_digest, load_instance, write_instance
from .model.mdp import enumerate_policies, policy_label
from .model.rational import format_rational, parse_rational, to_decimal
from .model.validator import InstanceValidator
from .reports import ReportDocument, get_renderer, list_renderers

logger = logging.getLogger(__name__)

INSTANCE_OPTION = click.option(
    '--instance', 'instance_path', required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Path to an instance JSON file.",
)


def _setup_logging(level: str, console: bool) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False, show_time=False)
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)
    if not console:
        handler.setLevel(logging.CRITICAL)


@click.group()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Path to a settings file. Defaults to config/settings.yaml.")
@click.option('--verbose', '-v', is_flag=True, help="Enable verbose logging.")
@click.option('--format', 'report_format', type=click.Choice(sorted(list_renderers())), default=None,
              help="Report format. Overrides the settings file.")
@click.option('--timing', is_flag=True, help="Include wall-clock timing in reports.")
@click.pass_context
def cli(ctx, config_path, verbose, report_format, timing):
    """Exact Blackwell-optimality toolkit for finite MDPs"""
    _setup_logging("ERROR", True)

    ctx.ensure_object(dict)
    try:
        config = load_config(config_path)
    except ConfigError as e:
        logging.error(f"Error loading configuration: {e}")
        click.echo(click.style(f"✗ {e}", fg="red"), err=True)
        ctx.exit(ConfigError.exit_code)

    # CLI --verbose flag overrides config file setting
    _setup_logging("DEBUG" if verbose else config.logging.get_log_level(), config.logging.console)

    ctx.obj['config'] = config
    ctx.obj['format'] = report_format or config.report.format
    ctx.obj['timing'] = timing
    ctx.obj['started'] = time.perf_counter()


@contextmanager
def reporting_errors(ctx):
    """Map toolkit errors onto their exit codes."""
    try:
        yield
    except BlackwellError as e:
        logging.error(f"{type(e).__name__}: {e}")
        click.echo(click.style(f"✗ {type(e).__name__}: {e}", fg="red"), err=True)
        ctx.exit(e.exit_code)


def _load(ctx, instance_path: Path):
    io = ctx.obj['config'].io
    return load_instance(instance_path, rationalize=io.rationalize_floats, max_denominator=io.max_denominator)


def _document(ctx, command: str, mdp=None, uncertainty=None) -> ReportDocument:
    digest = instance_digest(mdp, uncertainty) if mdp is not None else None
    return ReportDocument(command=command, instance_digest=digest)


def _emit(ctx, document: ReportDocument, report_format: Optional[str] = None) -> None:
    if ctx.obj['timing']:
        document.timing_seconds = time.perf_counter() - ctx.obj['started']
    renderer = get_renderer(report_format or ctx.obj['format'])
    try:
        text = renderer.render(document)
    except ValueError as e:
        raise click.UsageError(str(e))
    click.echo(text, nl=False)


def _decimal(ctx, q) -> str:
    return to_decimal(q, ctx.obj['config'].report.decimal_digits)


def _root(ctx, root: IsolatedRoot) -> str:
    return str(root) if root.is_exact else f"{root} ~ {_decimal(ctx, root.approx())}"


def _set_label(mdp, policies: Iterable, extra=None) -> str:
    return "{" + ", ".join(policy_label(mdp, pi, extra) for pi in sorted(policies)) + "}"


def _require_uncertainty(uncertainty):
    if uncertainty is None:
        raise InstanceFormatError("Instance has no 'uncertainty' block; --robust needs one")
    return uncertainty


@cli.command()
@INSTANCE_OPTION
@click.option('--gamma', required=True, help="Discount factor as num/den.")
@click.option('--exact/--float', 'exact', default=True, help="Exact policy iteration or float value iteration.")
@click.option('--tol', type=float, default=None, help="Stopping tolerance for --float.")
@click.option('--robust', is_flag=True, help="Solve the robust MDP given by the instance's uncertainty set.")
@click.pass_context
def solve(ctx, instance_path, gamma, exact, tol, robust):
    """Solve the discounted MDP at one discount factor."""
    config = ctx.obj['config']
    with reporting_errors(ctx):
        mdp, uncertainty = _load(ctx, instance_path)
        gamma = parse_rational(gamma)
        tol = tol if tol is not None else config.solvers.float_tolerance
        doc = _document(ctx, "solve", mdp, uncertainty if robust else None)
        extra = None

        if robust:
            uncertainty = _require_uncertainty(uncertainty)
            extra = uncertainty.radii
            result = robust_value_iteration(mdp, uncertainty, gamma, exact=exact, tol=tol,
                                            max_iterations=config.solvers.max_iterations)
            policy, values = result.policy, result.worst_case_values
        elif exact:
            result = exact_policy_iteration(mdp, gamma)
            policy, values = result.policy, result.values
        else:
            result = float_value_iteration(mdp, gamma, tol=tol, max_iterations=config.solvers.max_iterations)
            policy, values = result.policy, result.values

        doc.summary.update({
            "gamma": format_rational(check_gamma(gamma)),
            "method": "exact" if exact else "float",
            "robust": robust,
            "policy": policy_label(mdp, policy, extra),
            "actions": [mdp.action_label(a) for a in policy.actions],
            "iterations": result.iterations,
        })
        if exact and not robust:
            doc.summary["optimal_set"] = _set_label(mdp, optimal_policy_set(mdp, gamma, guard=config.analysis.policy_guard))
        if not exact:
            doc.summary["residual"] = repr(float(result.residual))

        rows = []
        for s, v in enumerate(values):
            if exact:
                rows.append([s, format_rational(v), _decimal(ctx, v)])
            else:
                rows.append([s, repr(float(v)), repr(float(v))])
        doc.add_table("Values", ["state", "value", "decimal"], rows)
        _emit(ctx, doc)


@cli.command()
@INSTANCE_OPTION
@click.option('--robust', is_flag=True, help="Use the robust bound (m' = 2m for l1 balls).")
@click.pass_context
def bound(ctx, instance_path, robust):
    """Closed-form upper bound 1 - eta(M) on the Blackwell discount factor."""
    with reporting_errors(ctx):
        mdp, uncertainty = _load(ctx, instance_path)
        if robust:
            uncertainty = _require_uncertainty(uncertainty)
            eta = robust_eta_bound(mdp, uncertainty)
        else:
            eta = eta_bound(mdp)
        doc = _document(ctx, "bound", mdp, uncertainty if robust else None)
        doc.summary.update({
            "robust": robust,
            "n_states": mdp.n_states,
            "m": eta.m,
            "r_inf": mdp.r_inf,
            "N": eta.N,
            "L": eta.L,
            "eta": format_rational(eta.eta),
            "eta_decimal": _decimal(ctx, eta.eta),
            "threshold": format_rational(eta.gamma_threshold),
            "threshold_decimal": _decimal(ctx, eta.gamma_threshold),
        })
        _emit(ctx, doc)


def _analysis_report(ctx, doc: ReportDocument, mdp, analysis: BlackwellAnalysis, extra=None) -> None:
    doc.summary.update({
        "gamma_bar": _root(ctx, analysis.gamma_bar),
        "gamma_bw": _root(ctx, analysis.gamma_bw),
        "blackwell_set": _set_label(mdp, analysis.blackwell_set, extra),
        "difference_polynomials": analysis.polynomial_count,
        "breakpoints": len(analysis.breakpoint_sets),
        "intervals": len(analysis.intervals),
    })
    doc.add_table(
        "Intervals", ["lower", "upper", "sample", "optimal set"],
        [[_root(ctx, iv.lower), _root(ctx, iv.upper), format_rational(iv.sample), _set_label(mdp, iv.optimal_set, extra)]
         for iv in analysis.intervals],
    )
    doc.add_table(
        "Breakpoints", ["breakpoint", "certificate", "optimal set"],
        [[_root(ctx, root), f"[{format_rational(root.lo)}, {format_rational(root.hi)}]", _set_label(mdp, opt, extra)]
         for root, opt in analysis.breakpoint_sets],
    )
    doc.add_table(
        "Thresholds", ["policy", "gamma(pi)"],
        [[policy_label(mdp, pi, extra), _root(ctx, root)] for pi, root in sorted(analysis.thresholds.items())],
    )


@cli.command()
@INSTANCE_OPTION
@click.option('--method', type=click.Choice(["exact", "reduction"]), default="exact", help="Breakpoint analysis or reduction.")
@click.option('--robust', is_flag=True, help="Analyse the robust MDP given by the instance's uncertainty set.")
@click.option('--gamma', default=None, help="Discount factor for the reduction (at least 1 - eta(M)).")
@click.pass_context
def blackwell(ctx, instance_path, method, robust, gamma):
    """Blackwell-optimal policies and the Blackwell discount factor."""
    settings = ctx.obj['config'].analysis
    with reporting_errors(ctx):
        mdp, uncertainty = _load(ctx, instance_path)
        if robust:
            uncertainty = _require_uncertainty(uncertainty)
        doc = _document(ctx, f"blackwell --method {method}", mdp, uncertainty if robust else None)
        extra = uncertainty.radii if robust else None
        gamma = parse_rational(gamma) if gamma is not None else None

        if method == "exact":
            kwargs = dict(guard=settings.policy_guard, parallel=settings.parallel,
                          max_workers=settings.max_workers, certificate_bits=settings.certificate_width_bits)
            if robust:
                analysis = robust_blackwell_analysis(mdp, uncertainty, vertex_guard=settings.vertex_guard, **kwargs)
            else:
                analysis = exact_blackwell_analysis(mdp, **kwargs)
            _analysis_report(ctx, doc, mdp, analysis, extra)
        else:
            if robust:
                eta = robust_eta_bound(mdp, uncertainty)
                policy = robust_blackwell_optimal_policy(mdp, uncertainty, gamma=gamma, guard=settings.policy_guard,
                                                         vertex_guard=settings.vertex_guard)
                used = gamma if gamma is not None else eta.gamma_threshold
            else:
                eta = eta_bound(mdp)
                used = reduction_gamma(mdp, gamma)
                policy = blackwell_optimal_policy(mdp, method="reduction", gamma=used, guard=settings.policy_guard)
            doc.summary.update({
                "policy": policy_label(mdp, policy, extra),
                "actions": [mdp.action_label(a) for a in policy.actions],
                "gamma": format_rational(used),
                "gamma_decimal": _decimal(ctx, used),
                "eta": format_rational(eta.eta),
            })
        _emit(ctx, doc)


@cli.command()
@click.option('--family', type=click.Choice(["example1", "intervals", "random"]), required=True)
@click.option('--breakpoints', default="0,1/5,2/5,3/5,4/5,1", help="Comma-separated breakpoints for --family intervals.")
@click.option('--n-states', type=int, default=3)
@click.option('--n-actions', type=int, default=2)
@click.option('--m', 'm', type=int, default=4, help="Common denominator for --family random.")
@click.option('--r-max', type=int, default=4, help="Rewards are q/m with |q| <= r-max.")
@click.option('--seed', type=int, default=0)
@click.option('--norm', type=click.Choice([n.value for n in Norm]), default=None, help="Attach a random uncertainty set.")
@click.option('--beta-max', type=int, default=1, help="Radii are beta/m with beta <= beta-max.")
@click.option('--out', 'out_path', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Output file. Prints to stdout when omitted.")
@click.pass_context
def gen(ctx, family, breakpoints, n_states, n_actions, m, r_max, seed, norm, beta_max, out_path):
    """Generate an instance file."""
    with reporting_errors(ctx):
        if family == "example1":
            mdp = example_one()
        elif family == "intervals":
            mdp = interval_instance(IntervalSpec.parse(breakpoints))
        else:
            mdp = random_instance(n_states, n_actions, m, r_max, seed)
        uncertainty = random_uncertainty(mdp, Norm(norm), beta_max, seed) if norm else None

        if out_path is None:
            click.echo(canonical_json(mdp, uncertainty), nl=False)
            return
        write_instance(out_path, mdp, uncertainty)
        click.echo(click.style(f"✓ Wrote {family} instance to {out_path}", fg="green"), err=True)


@cli.command()
@INSTANCE_OPTION
@click.option('--grid', 'grid', type=int, default=None, help="Number of grid points k/K, k = 0..K-1.")
@click.option('--policies', default="all", help="'all' or comma-separated policy labels.")
@click.option('--state', type=int, default=0, help="State whose values are plotted.")
@click.option('--exact', is_flag=True, help="Write values as num/den instead of decimals.")
@click.pass_context
def plotdata(ctx, instance_path, grid, policies, state, exact):
    """Emit value curves of every policy as CSV."""
    config = ctx.obj['config']
    grid = grid if grid is not None else config.report.plot_grid
    with reporting_errors(ctx):
        if grid < 1:
            raise click.BadParameter("grid must be at least 1", param_hint="--grid")
        mdp, _ = _load(ctx, instance_path)
        if not 0 <= state < mdp.n_states:
            raise click.BadParameter(f"state must be in 0..{mdp.n_states - 1}", param_hint="--state")
        labelled = {policy_label(mdp, pi): pi for pi in enumerate_policies(mdp, guard=config.analysis.policy_guard, canonical=True)}
        if policies != "all":
            wanted = [p.strip() for p in policies.split(",") if p.strip()]
            unknown = [p for p in wanted if p not in labelled]
            if unknown:
                raise click.BadParameter(f"unknown policies {unknown}; known: {sorted(labelled)}", param_hint="--policies")
            labelled = {label: labelled[label] for label in wanted}

        curves = {label: value_function(mdp, pi, state) for label, pi in labelled.items()}
        render = format_rational if exact else (lambda q: _decimal(ctx, q))
        rows = []
        for k in range(grid):
            gamma = Fraction(k, grid)
            rows.append([render(gamma)] + [render(curve(gamma)) for curve in curves.values()])

        doc = _document(ctx, "plotdata", mdp)
        doc.add_table("Value curves", ["gamma"] + list(curves), rows)
        _emit(ctx, doc, "csv")


@cli.command()
@INSTANCE_OPTION
@click.pass_context
def validate(ctx, instance_path):
    """Validate an instance file."""
    with reporting_errors(ctx):
        mdp, uncertainty = _load(ctx, instance_path)
        summary = InstanceValidator(mdp, uncertainty, ctx.obj['config']).run_all_validations()
        doc = _document(ctx, "validate", mdp, uncertainty)
        doc.summary.update(summary)
        _emit(ctx, doc)
        click.echo(click.style("✓ Validation passed", fg="green"), err=True)


@cli.command()
@INSTANCE_OPTION
@click.pass_context
def average(ctx, instance_path):
    """Average-reward gains and the average-optimal policies."""
    with reporting_errors(ctx):
        mdp, _ = _load(ctx, instance_path)
        best, optimal, gains = average_optimal_policies(mdp, guard=ctx.obj['config'].analysis.policy_guard)
        doc = _document(ctx, "average", mdp)
        doc.summary.update({
            "optimal_gain": [format_rational(g) for g in best],
            "average_optimal_set": _set_label(mdp, optimal),
        })
        doc.add_table(
            "Gains", ["policy"] + [f"s{s}" for s in range(mdp.n_states)],
            [[policy_label(mdp, pi)] + [format_rational(g) for g in gain] for pi, gain in sorted(gains.items())],
        )
        _emit(ctx, doc)


@cli.command("list-formats")
def list_formats_command():
    """List all available report formats."""
    click.echo("Available formats:")
    for name, renderer in list_renderers().items():
        click.echo(f"  - {name} ({renderer.description})")


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
