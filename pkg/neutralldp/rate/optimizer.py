"""
The rate function I(f) = inf { L_T(h) : F(h) in event } over discretised controls.

Each restart runs an augmented-Lagrangian outer loop around an L-BFGS-B inner solve. The
action gradient is analytic; the penalty gradient comes from central finite differences
evaluated as one batched skeleton solve of 2N + 1 controls. Restarts are independent and
run on a thread pool; the best is picked by (not converged, value, restart index).
"""

import logging

import attr
import numpy as np
from scipy.optimize import minimize

from .._concurrency import ordered_map
from .._errors import NotConverged
from ..sim.neutral import DEFAULT_MAX_ITER, DEFAULT_TOL
from ..skeleton import ControlPath, solve_skeleton, solve_skeleton_batch, truncate_coeffs
from .action import action, action_flat

LOGGER = logging.getLogger(__name__)


@attr.s(frozen=True, slots=True)
class RateOptions:
    """Penalty schedule, gradient step, tolerances and restarts of the rate optimiser."""

    restarts = attr.ib(default=8)
    penalty_start = attr.ib(default=10.0)
    penalty_max = attr.ib(default=1e5)
    penalty_factor = attr.ib(default=2.0)
    fd_step = attr.ib(default=1e-6)
    constraint_tol = attr.ib(default=1e-6)
    objective_rtol = attr.ib(default=1e-8)
    max_outer = attr.ib(default=60)
    inner_maxiter = attr.ib(default=500)
    start_scale = attr.ib(default=1.0)
    seed = attr.ib(default=0)
    threads = attr.ib(default=None)
    strict = attr.ib(default=False)
    fixed_point_tol = attr.ib(default=DEFAULT_TOL)
    max_iter = attr.ib(default=DEFAULT_MAX_ITER)

    @restarts.validator
    def _check_restarts(self, attribute, value):
        if value < 1:
            raise ValueError("restarts must be at least 1")


@attr.s(frozen=True, slots=True, eq=False)
class RateResult:
    """
    Best control found for an event.

    ``value`` is recomputed from ``minimizer``; ``restart_values`` lists the action reached
    by every restart in restart order.
    """

    value = attr.ib()
    minimizer = attr.ib()
    constraint_residual = attr.ib()
    iterations = attr.ib()
    converged = attr.ib()
    path = attr.ib(default=None)
    restart_values = attr.ib(default=())


@attr.s(frozen=True, slots=True, eq=False)
class RateProblem:
    """
    The penalised objective L_T(h) + psi(c(F(h)); lam, mu) on flat control arrays.

    psi is the augmented-Lagrangian term for inequality constraints,
    (max(0, lam + mu c)^2 - lam^2) / (2 mu), summed over constraints.
    """

    coeffs = attr.ib()
    xi = attr.ib()
    event = attr.ib()
    mesh = attr.ib()
    fd_step = attr.ib(default=1e-6)
    tol = attr.ib(default=DEFAULT_TOL)
    max_iter = attr.ib(default=DEFAULT_MAX_ITER)

    @property
    def size(self):
        return self.mesh.n_forward * self.coeffs.dim

    def paths(self, flats):
        hdot = np.asarray(flats, dtype=float).reshape(-1, self.mesh.n_forward, self.coeffs.dim)
        return solve_skeleton_batch(
            self.coeffs, self.xi, hdot, self.mesh, tol=self.tol, max_iter=self.max_iter
        )

    def constraints(self, flat):
        return self.event.constraint_values(self.paths(flat[None]))[0]

    def _penalties(self, flats, lam, mu):
        c = self.event.constraint_values(self.paths(flats))
        return np.sum(np.maximum(lam + mu * c, 0.0) ** 2 - lam**2, axis=-1) / (2 * mu)

    def objective(self, flat, lam=0.0, mu=10.0):
        flat = np.asarray(flat, dtype=float)
        penalty = self._penalties(flat[None], lam, mu)[0]
        return action_flat(flat, self.mesh.step) + float(penalty)

    def objective_and_gradient(self, flat, lam=0.0, mu=10.0):
        flat = np.asarray(flat, dtype=float)
        shifts = self.fd_step * np.eye(flat.size)
        batch = np.concatenate([flat[None], flat + shifts, flat - shifts])
        penalties = self._penalties(batch, lam, mu)
        size = flat.size
        grad = flat * self.mesh.step + (
            penalties[1 : size + 1] - penalties[size + 1 :]
        ) / (2 * self.fd_step)
        return action_flat(flat, self.mesh.step) + float(penalties[0]), grad


@attr.s(frozen=True, slots=True, eq=False)
class _RestartOutcome:
    flat = attr.ib()
    value = attr.ib()
    residual = attr.ib()
    iterations = attr.ib()
    converged = attr.ib()


def _start(problem, opts, restart):
    if restart == 0:
        return np.zeros(problem.size)
    rng = np.random.default_rng([opts.seed, restart])
    return opts.start_scale * rng.standard_normal(problem.size)


def _run_restart(problem, opts, restart):
    flat = _start(problem, opts, restart)
    n_constraints = problem.constraints(flat).size
    lam = np.zeros(n_constraints)
    mu = opts.penalty_start
    iterations = 0
    previous_value, previous_residual = None, np.inf
    value, residual, converged = np.inf, np.inf, False

    for _ in range(opts.max_outer):
        result = minimize(
            problem.objective_and_gradient,
            flat,
            args=(lam, mu),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": opts.inner_maxiter, "gtol": 1e-10, "ftol": 1e-15},
        )
        flat = result.x
        iterations += int(result.nit)

        c = problem.constraints(flat)
        residual = float(np.max(np.maximum(c, 0.0)))
        value = action_flat(flat, problem.mesh.step)
        lam = np.maximum(0.0, lam + mu * c)

        stalled = previous_value is not None and abs(value - previous_value) <= (
            opts.objective_rtol * max(abs(value), 1.0)
        )
        if residual <= opts.constraint_tol and stalled:
            converged = True
            break
        if residual > previous_residual / 4:
            mu = min(mu * opts.penalty_factor, opts.penalty_max)
        previous_value, previous_residual = value, residual

    LOGGER.debug(
        f"restart {restart}: value {value!r}, residual {residual:.2e}, "
        f"{iterations} iterations, converged={converged}"
    )
    return _RestartOutcome(flat, value, residual, iterations, converged)


def minimize_action(problem, opts=None):
    """
    Multi-start minimisation of the action over controls whose skeleton lies in the event.

    :type problem: RateProblem
    :raises NotConverged: if ``opts.strict`` and no restart converged
    """
    opts = opts or RateOptions()
    outcomes = ordered_map(
        lambda restart: _run_restart(problem, opts, restart),
        range(opts.restarts),
        threads=opts.threads,
    )
    best_index = min(
        range(len(outcomes)),
        key=lambda i: (not outcomes[i].converged, outcomes[i].value, i),
    )
    best = outcomes[best_index]

    minimizer = ControlPath.from_flat(problem.mesh, problem.coeffs.dim, best.flat)
    path = solve_skeleton(
        problem.coeffs,
        problem.xi,
        minimizer,
        problem.mesh,
        tol=problem.tol,
        max_iter=problem.max_iter,
    )
    result = RateResult(
        value=action(minimizer),
        minimizer=minimizer,
        constraint_residual=float(problem.event.residual(path.values[None])[0]),
        iterations=sum(outcome.iterations for outcome in outcomes),
        converged=best.converged,
        path=path,
        restart_values=tuple(outcome.value for outcome in outcomes),
    )
    LOGGER.info(
        f"{problem.coeffs.name}: rate {result.value!r} from restart {best_index}, "
        f"residual {result.constraint_residual:.2e}"
    )
    if not result.converged:
        LOGGER.warning(f"{problem.coeffs.name}: rate optimiser did not converge")
        if opts.strict:
            raise NotConverged(
                f"no restart met residual <= {opts.constraint_tol:g}", result=result
            )
    return result


def _problem(coeffs, xi, event, mesh, opts):
    return RateProblem(
        coeffs,
        xi,
        event,
        mesh,
        fd_step=opts.fd_step,
        tol=opts.fixed_point_tol,
        max_iter=opts.max_iter,
    )


def rate_for_event(coeffs, xi, event, mesh, opts=None):
    """
    Upper bound on inf { L_T(h) : F(h) in event } over piecewise-constant controls.

    :type event: EventSpec
    :type opts: RateOptions
    :returns: RateResult; ``converged`` asserts constraint satisfaction only
    """
    opts = opts or RateOptions()
    return minimize_action(_problem(coeffs, xi, event, mesh, opts), opts)


def rate_for_event_truncated(coeffs, R, m_R, xi, event, mesh, opts=None):
    """The truncated rate I_R: :func:`rate_for_event` for the truncated coefficients."""
    return rate_for_event(truncate_coeffs(coeffs, R, m_R), xi, event, mesh, opts)


def fd_gradient_check(coeffs, xi, event, h0, lam=0.0, mu=10.0, steps=(1e-4, 1e-5)):
    """
    Worst relative gap between the optimiser's gradient at ``h0`` and central differences
    of the whole objective at each of ``steps``.

    Relative error is max |g - g_ref| / max(max |g_ref|, 1e-12).
    """
    problem = RateProblem(coeffs, xi, event, h0.mesh)
    flat = h0.flat
    _, grad = problem.objective_and_gradient(flat, lam, mu)
    worst = 0.0
    for step in steps:
        shifts = step * np.eye(flat.size)
        reference = np.array(
            [
                (problem.objective(flat + e, lam, mu) - problem.objective(flat - e, lam, mu))
                / (2 * step)
                for e in shifts
            ]
        )
        scale = max(float(np.max(np.abs(reference))), 1e-12)
        worst = max(worst, float(np.max(np.abs(grad - reference))) / scale)
    return worst
