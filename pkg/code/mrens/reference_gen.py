"""relax-and-cut generation of reference solutions

GMI cuts separating the current LP optimum are not added as rows. They are
priced into the objective with Lagrangian multipliers, and the LP is re-solved over
the unchanged feasible region. The sequence of LP optima are the reference
solutions.
"""

import dataclasses
import logging

import numpy as np

from .gmi_cuts import MAX_CUTS_PER_ROUND, generate_gmi_round, same_cut
from .lp_simplex import ITERATION_LIMIT, OPTIMAL, solve_lp
from .model import Solution, is_integral, lp_relaxation

logger = logging.getLogger(__name__)

# multipliers are considered converged below this change
LAMBDA_TOL = 1e-8
# consecutive LP optima closer than this are recorded once
DUPLICATE_TOL = 1e-9
# the step parameter is halved after this many iterations without dual improvement
MU_PATIENCE = 3

MAX_REFERENCES = 3

COMPLETE = "complete"


@dataclasses.dataclass(frozen=True)
class RefGenConfig:
    """settings of the relax-and-cut loop

    Parameters
    ----------
    max_iterations : int, default: 20
        Number of separate-update-resolve iterations. 0 returns the LP optimum only.
    cuts_per_round : int, default: 10
        Maximum number of GMI cuts separated per iteration.
    mu0 : float, default: 1.0
        Initial step parameter of the subgradient method.
    lp_iteration_limit : int, default: ITERATION_LIMIT
        Simplex iteration limit of every LP solve.
    """

    max_iterations: int = 20
    cuts_per_round: int = MAX_CUTS_PER_ROUND
    mu0: float = 1.0
    lp_iteration_limit: int = ITERATION_LIMIT

    def __post_init__(self):

        if self.max_iterations < 0:
            raise ValueError("max_iterations must not be negative")
        if self.cuts_per_round < 1:
            raise ValueError("cuts_per_round must be positive")
        if self.mu0 <= 0:
            raise ValueError("mu0 must be positive")


@dataclasses.dataclass(frozen=True)
class LagrangianState:
    """multipliers and bookkeeping of the subgradient method

    ``dual_values`` holds L(lambda) of every update, ``best_dual_value`` their
    maximum.
    """

    objective: np.ndarray
    cut_pool: tuple = ()
    multipliers: np.ndarray = dataclasses.field(default_factory=lambda: np.zeros(0))
    best_dual_value: float = -np.inf
    incumbent_primal_value: float = np.inf
    mu: float = 1.0
    iteration: int = 0
    non_improving: int = 0
    dual_values: tuple = ()

    def with_cuts(self, cuts):
        """add cuts with multiplier 0"""

        multipliers = np.concatenate([self.multipliers, np.zeros(len(cuts))])
        return dataclasses.replace(
            self, cut_pool=self.cut_pool + tuple(cuts), multipliers=multipliers
        )

    def with_incumbent(self, value):

        if value >= self.incumbent_primal_value:
            return self
        return dataclasses.replace(self, incumbent_primal_value=value)


class ReferenceSet:
    """LP optima of the relax-and-cut loop

    Attributes
    ----------
    all_solutions : list of ndarray
        Recorded optima in order; the first is the optimum of the LP relaxation.
    selected : list of ndarray
        References handed to the neighborhood construction.
    integral_found : list of Solution
        Integral optima met on the way.
    status : str
        "complete" or the LP status that prevented the loop from starting.
    dual_values : list of float
        Lagrangian dual value of every iteration.
    cut_pool : list of GmiCut
    iterations : int
        Number of multiplier updates.
    lp_iterations : int
        Simplex iterations over all LP solves.
    """

    def __init__(
        self,
        all_solutions=(),
        integral_found=(),
        status=COMPLETE,
        dual_values=(),
        cut_pool=(),
        iterations=0,
        lp_iterations=0,
    ):

        self.all_solutions = list(all_solutions)
        self.selected = select_references(self.all_solutions)
        self.integral_found = list(integral_found)
        self.status = status
        self.dual_values = list(dual_values)
        self.cut_pool = list(cut_pool)
        self.iterations = iterations
        self.lp_iterations = lp_iterations

    @property
    def root(self):
        """optimum of the LP relaxation (None if the loop did not start)"""
        return self.all_solutions[0] if self.all_solutions else None

    @property
    def best_integral(self):

        if not self.integral_found:
            return None
        return min(self.integral_found, key=lambda sol: sol.objective_value)

    def __len__(self):
        return len(self.all_solutions)

    def __repr__(self):
        return (
            f"<ReferenceSet {self.status}: {len(self.all_solutions)} solutions, "
            f"{len(self.selected)} selected, {len(self.integral_found)} integral>"
        )


def select_references(solutions):
    """the first and the last two solutions, without duplicates"""

    k = len(solutions) - 1
    if k < 0:
        return []

    selected = list()
    for i in sorted({0, max(k - 1, 0), k}):
        x = solutions[i]
        if not any(np.array_equal(x, y) for y in selected):
            selected.append(x)

    return selected


def lagrangian_objective(c, cut_pool, multipliers):
    """c - sum of multiplier * cut coefficients

    Parameters
    ----------
    c : array-like of float
        Original objective.
    cut_pool : sequence of GmiCut
    multipliers : array-like of float
        Nonnegative, one per cut.

    Returns
    -------
    objective : ndarray
        Linear part of the Lagrangian objective. The constant part is
        ``lagrangian_constant(cut_pool, multipliers)``.
    """

    c = np.asarray(c, dtype=float)
    multipliers = np.asarray(multipliers, dtype=float)

    if multipliers.shape != (len(cut_pool),):
        msg = f"expected {len(cut_pool)} multipliers, found {multipliers.shape}"
        raise ValueError(msg)

    if np.any(multipliers < 0):
        raise ValueError("Lagrangian multipliers must be nonnegative")

    out = c.copy()
    for cut, lam in zip(cut_pool, multipliers):
        if lam != 0:
            out[cut.indices] -= lam * cut.values

    return out


def lagrangian_constant(cut_pool, multipliers):
    """sum of multiplier * cut rhs"""

    rhs = np.array([cut.rhs for cut in cut_pool], dtype=float)
    return float(np.asarray(multipliers, dtype=float) @ rhs) if rhs.size else 0.0


def dual_value(state, x):
    """value of the Lagrangian function at x for the multipliers of ``state``"""

    linear = lagrangian_objective(state.objective, state.cut_pool, state.multipliers)
    constant = lagrangian_constant(state.cut_pool, state.multipliers)

    return float(linear @ np.asarray(x, dtype=float) + constant)


def _subgradient(cut_pool, x):

    return np.array([cut.rhs - cut.values @ x[cut.indices] for cut in cut_pool])


def update_multipliers(state, x):
    """one projected subgradient step

    Parameters
    ----------
    state : LagrangianState
    x : array-like of float
        LP optimum under the Lagrangian objective of ``state``.

    Returns
    -------
    state : LagrangianState
        New state with updated multipliers, dual values and step parameter.
    """

    x = np.asarray(x, dtype=float)

    value = dual_value(state, x)

    if value > state.best_dual_value + 1e-9:
        best, non_improving = value, 0
    else:
        best, non_improving = state.best_dual_value, state.non_improving + 1

    mu = state.mu
    if non_improving >= MU_PATIENCE:
        mu, non_improving = mu / 2, 0

    g = _subgradient(state.cut_pool, x)
    norm2 = float(g @ g) if g.size else 0.0

    multipliers = state.multipliers
    if norm2 > 0:

        if np.isfinite(state.incumbent_primal_value):
            gap = max(state.incumbent_primal_value - value, 0.0)
            step = mu * gap / norm2
        else:
            step = mu / (state.iteration + 1)

        multipliers = np.maximum(0.0, multipliers + step * g)

    return dataclasses.replace(
        state,
        multipliers=multipliers,
        best_dual_value=best,
        mu=mu,
        iteration=state.iteration + 1,
        non_improving=non_improving,
        dual_values=state.dual_values + (value,),
    )


def _record_integral(integral_found, model, x):

    solution = Solution.from_values(model, x)
    if not any(np.array_equal(solution.values, s.values) for s in integral_found):
        integral_found.append(solution)

    return solution.objective_value


def run_relax_and_cut(model, config=None):
    """generate reference solutions with the relax-and-cut loop

    Parameters
    ----------
    model : MilpModel
        Model with integer variables.
    config : RefGenConfig, optional
        Loop settings. Default: ``RefGenConfig()``.

    Returns
    -------
    references : ReferenceSet
        Empty with the LP status as ``status`` if the LP relaxation could not be
        solved to optimality.
    """

    if config is None:
        config = RefGenConfig()

    relaxation = lp_relaxation(model)
    sol = solve_lp(relaxation, iteration_limit=config.lp_iteration_limit)
    lp_iterations = sol.iterations

    if sol.status != OPTIMAL:
        logger.info("LP relaxation of '%s' is %s - no references", model.name, sol.status)
        return ReferenceSet(status=sol.status, lp_iterations=lp_iterations)

    x = sol.values.copy()
    solutions = [x]
    integral_found = list()

    state = LagrangianState(objective=np.array(model.objective), mu=config.mu0)

    if is_integral(x, model.integer_indices):
        value = _record_integral(integral_found, model, x)
        state = state.with_incumbent(value)
        logger.debug("LP optimum is integral - no relax-and-cut iterations")
        return ReferenceSet(solutions, integral_found, lp_iterations=lp_iterations)

    for k in range(config.max_iterations):

        cuts = generate_gmi_round(model, sol, max_cuts=config.cuts_per_round)
        new_cuts = [
            cut for cut in cuts if not any(same_cut(cut, old) for old in state.cut_pool)
        ]

        state = state.with_cuts(new_cuts)
        previous = state.multipliers
        state = update_multipliers(state, x)

        change = np.max(np.abs(state.multipliers - previous), initial=0.0)
        logger.debug(
            "iteration %d: %d new cuts, dual value %.6g", k, len(new_cuts), state.dual_values[-1]
        )

        if not new_cuts and change < LAMBDA_TOL:
            logger.debug("multipliers converged after %d iterations", k + 1)
            break

        objective = lagrangian_objective(model.objective, state.cut_pool, state.multipliers)
        sol = solve_lp(
            relaxation,
            objective_override=objective,
            warm_basis=sol.basis,
            iteration_limit=config.lp_iteration_limit,
        )
        lp_iterations += sol.iterations

        if sol.status != OPTIMAL:
            logger.warning(
                "Lagrangian LP of '%s' is %s - stopping the loop", model.name, sol.status
            )
            break

        x = sol.values.copy()

        if np.max(np.abs(x - solutions[-1])) > DUPLICATE_TOL:
            solutions.append(x)

        if is_integral(x, model.integer_indices):
            value = _record_integral(integral_found, model, x)
            state = state.with_incumbent(value)

    return ReferenceSet(
        solutions,
        integral_found,
        dual_values=state.dual_values,
        cut_pool=state.cut_pool,
        iterations=state.iteration,
        lp_iterations=lp_iterations,
    )
