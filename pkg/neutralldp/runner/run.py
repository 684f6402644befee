"""
Dispatch of a validated experiment config to the library and persistence of its results.
"""

import datetime
import logging

import attr
import numpy as np

from .. import __version__
from .._errors import ConfigError, InputError, NumericalError, OutputError
from ..lab import (
    compare_rate_vs_mc,
    stroock_bound_check,
    verify_exponential_closeness,
    verify_tightness,
    verify_truncation_closeness,
)
from ..model import Segment, check_assumption, estimate_m_R, make_mesh
from ..rate import (
    ENDPOINT_BALL,
    EventSpec,
    RateOptions,
    qp_oracle_linear,
    rate_for_event,
    rate_for_event_truncated,
)
from ..sim import NoiseSeed, simulate_nsfde
from ..skeleton import ControlPath, solve_skeleton, solve_skeleton_n
from .config import config_digest
from .output import manifest_path, write_csv, write_json
from .presets import create_model

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_OUTPUT = 4


def exit_code(error):
    """Process exit status for an exception raised by :func:`run_experiment`."""
    if isinstance(error, InputError):
        return EXIT_INPUT
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(error, OutputError):
        return EXIT_OUTPUT
    return EXIT_FAILURE


@attr.s(frozen=True, slots=True)
class RunManifest:
    config_digest = attr.ib()
    artifact_version = attr.ib()
    started = attr.ib()
    finished = attr.ib()
    row_count = attr.ib()
    experiment = attr.ib(default=None)
    output_path = attr.ib(default=None)

    def to_dict(self):
        return attr.asdict(self)


@attr.s(frozen=True, slots=True, eq=False)
class RunContext:
    """Objects derived once from a config and shared by the experiment runners."""

    config = attr.ib()
    threads = attr.ib(default=None)
    model = attr.ib(default=None)
    mesh = attr.ib(default=None)
    xi = attr.ib(default=None)

    @property
    def coeffs(self):
        return self.model.coeffs

    @property
    def tol(self):
        return self.config.tolerances["fixed_point_tol"]

    @property
    def max_iter(self):
        return int(self.config.tolerances["max_iter"])

    @property
    def state_columns(self):
        return [f"x{i}" for i in range(self.coeffs.dim)]

    def vector(self, value):
        return np.broadcast_to(np.asarray(value, dtype=float), (self.coeffs.dim,))


RUNNERS = {}


def runner(experiment):
    """Register the decorated function as the runner of ``experiment``."""

    def decorator(func):
        RUNNERS[experiment] = func
        return func

    return decorator


def _path_rows(label, path):
    return [(label, t, *x) for t, x in zip(path.mesh.times, path.values)]


@runner("simulate")
def _simulate(ctx):
    rows = []
    for eps in ctx.config.eps_list:
        path = simulate_nsfde(
            ctx.coeffs,
            ctx.xi,
            eps,
            ctx.mesh,
            NoiseSeed(ctx.config.seed),
            tol=ctx.tol,
            max_iter=ctx.max_iter,
        )
        rows.extend(_path_rows(eps, path))
    return ["eps", "t", *ctx.state_columns], rows


@runner("skeleton")
def _skeleton(ctx):
    h = ControlPath.constant(ctx.mesh, ctx.vector(ctx.config.control), ctx.coeffs.dim)
    rows = []
    for n in ctx.config.n_list:
        path = solve_skeleton_n(
            ctx.coeffs, ctx.xi, h, ctx.mesh, n, tol=ctx.tol, max_iter=ctx.max_iter
        )
        rows.extend(_path_rows(n, path))
    live = solve_skeleton(ctx.coeffs, ctx.xi, h, ctx.mesh, tol=ctx.tol, max_iter=ctx.max_iter)
    rows.extend(_path_rows(float("inf"), live))
    return ["n", "t", *ctx.state_columns], rows


def _event(ctx):
    spec = ctx.config.event
    return EventSpec(
        kind=spec["kind"],
        center=ctx.vector(spec["center"]),
        radius_delta=spec["radius_delta"],
        normal=spec.get("normal"),
    )


def _rate_options(ctx):
    options = {"seed": ctx.config.seed, "threads": ctx.threads}
    options.update(ctx.config.optimizer)
    options.setdefault("fixed_point_tol", ctx.tol)
    options.setdefault("max_iter", ctx.max_iter)
    return RateOptions(**options)


def _oracle_value(ctx, event, required=False):
    if ctx.model.affine is None or event.kind != ENDPOINT_BALL:
        if required:
            raise ConfigError(
                "the oracle needs affine coefficients and an endpoint_ball event",
                field="rate_source",
            )
        return None
    try:
        return qp_oracle_linear(ctx.model.affine, ctx.xi, event.center, ctx.mesh).value
    except NumericalError as e:
        if required:
            raise
        LOGGER.warning(f"oracle unavailable: {e}")
        return None


def _m_R(ctx, R):
    m_R = ctx.config.ldp.get("m_R")
    if isinstance(m_R, dict):
        by_radius = {float(radius): float(value) for radius, value in m_R.items()}
        if float(R) not in by_radius:
            raise ConfigError(f"ldp.m_R has no entry for R = {R}", field="ldp.m_R")
        return by_radius[float(R)]
    if m_R is not None:
        return float(m_R)
    return estimate_m_R(ctx.coeffs, R, n_slots=ctx.mesh.n_slots, seed=ctx.config.seed)


@runner("rate")
def _rate(ctx):
    event = _event(ctx)
    opts = _rate_options(ctx)
    result = rate_for_event(ctx.coeffs, ctx.xi, event, ctx.mesh, opts)
    rows = [
        (
            float("inf"),
            result.value,
            result.constraint_residual,
            result.iterations,
            result.converged,
            _oracle_value(ctx, event),
        )
    ]
    for R in ctx.config.R_list:
        truncated = rate_for_event_truncated(
            ctx.coeffs, R, _m_R(ctx, R), ctx.xi, event, ctx.mesh, opts
        )
        rows.append(
            (
                R,
                truncated.value,
                truncated.constraint_residual,
                truncated.iterations,
                truncated.converged,
                None,
            )
        )
    columns = ["R", "value", "constraint_residual", "iterations", "converged", "oracle_value"]
    return columns, rows


@runner("check-assumptions")
def _check_assumptions(ctx):
    rows = []
    for which in ctx.config.assumptions:
        report = check_assumption(
            ctx.coeffs, which, trials=ctx.config.trials, seed=ctx.config.seed
        )
        rows.append(
            (
                report.assumption_id,
                report.passed,
                report.worst_ratio,
                report.declared,
                report.trials,
            )
        )
    return ["assumption", "passed", "worst_ratio", "declared", "trials"], rows


@runner("ldp-verify")
def _ldp_verify(ctx):
    config, ldp = ctx.config, ctx.config.ldp
    common = {"mesh": ctx.mesh, "threads": ctx.threads, "tol": ctx.tol}
    lemma = ldp["lemma"]
    if lemma == "closeness":
        curve = verify_exponential_closeness(
            ctx.coeffs,
            ctx.xi,
            ldp["delta"],
            config.n_list,
            config.eps_list,
            config.samples,
            config.seed,
            **common,
        )
    elif lemma == "tightness":
        curve = verify_tightness(
            ctx.coeffs,
            ctx.xi,
            config.R_list,
            config.eps_list,
            config.samples,
            config.seed,
            **common,
        )
    else:
        curve = verify_truncation_closeness(
            ctx.coeffs,
            ctx.xi,
            ldp["delta"],
            config.R_list,
            config.eps_list,
            config.samples,
            config.seed,
            m_R=lambda R: _m_R(ctx, R),
            **common,
        )
    columns = [
        "control_parameter",
        "eps",
        "probability",
        "ci_halfwidth_95",
        "eps_log_p",
        "censored",
    ]
    rows = [
        (
            row.control_parameter,
            row.eps,
            row.probability,
            row.ci_halfwidth_95,
            row.eps_log_p,
            row.censored,
        )
        for row in curve.rows
    ]
    return columns, rows


@runner("stroock")
def _stroock(ctx):
    params = ctx.config.stroock
    report = stroock_bound_check(
        params["A"],
        params["B"],
        params["R"],
        params["T"],
        int(params.get("dim", 1)),
        ctx.config.samples,
        ctx.config.seed,
        steps=int(params.get("steps", 1000)),
        threads=ctx.threads,
    )
    empirical = report.empirical
    row = (
        empirical.probability,
        empirical.ci_halfwidth_95,
        report.bound,
        report.oracle,
        report.holds,
    )
    return ["probability", "ci_halfwidth_95", "bound", "oracle", "holds"], [row]


@runner("compare")
def _compare(ctx):
    config = ctx.config
    event = _event(ctx)
    rate_value = None
    if config.rate_source == "oracle":
        rate_value = _oracle_value(ctx, event, required=True)
    report = compare_rate_vs_mc(
        ctx.coeffs,
        ctx.xi,
        event,
        ctx.mesh,
        config.eps_list,
        config.samples,
        config.seed,
        opts=_rate_options(ctx),
        rate_value=rate_value,
        threads=ctx.threads,
    )
    rows = [(row.eps, row.eps_log_p, row.neg_rate, row.censored) for row in report.rows]
    return ["eps", "eps_log_p", "neg_rate", "censored"], rows


def _context(config, threads):
    if config.experiment == "stroock":
        return RunContext(config, threads)
    model = create_model(config.coefficients)
    mesh = make_mesh(**config.mesh)
    dim = model.coeffs.dim
    xi = Segment.constant(mesh, np.broadcast_to(np.asarray(config.initial, dtype=float), (dim,)))
    return RunContext(config, threads, model, mesh, xi)


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def run_experiment(config, threads=None):
    """
    Run ``config`` and write its CSV and manifest sidecar atomically.

    :type config: ExperimentConfig
    :param threads: worker threads; results do not depend on it
    :returns: RunManifest
    :raises InputError: for unusable inputs (exit 2)
    :raises NumericalError: for failed numerics (exit 3)
    :raises OutputError: if the output cannot be written (exit 4)
    """
    started = _now()
    output_path = config.output_path or f"{config.experiment}.csv"
    digest = config_digest(config)
    LOGGER.info(f"running {config.experiment} (config {digest[:12]})")

    try:
        ctx = _context(config, threads)
    except ValueError as e:
        raise ConfigError(str(e))
    columns, rows = RUNNERS[config.experiment](ctx)

    header = [
        ("config_digest", digest),
        ("artifact_version", __version__),
        ("experiment", config.experiment),
    ]
    write_csv(output_path, header, columns, rows)
    manifest = RunManifest(
        config_digest=digest,
        artifact_version=__version__,
        started=started,
        finished=_now(),
        row_count=len(rows),
        experiment=config.experiment,
        output_path=str(output_path),
    )
    write_json(manifest_path(output_path), manifest.to_dict())
    LOGGER.info(f"wrote {len(rows)} rows to {output_path}")
    return manifest
