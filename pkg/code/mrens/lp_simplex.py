"""bounded-variable primal simplex for the LP relaxation

The rows ``Ax >= b`` are augmented with one slack per row, ``Ax - s = b`` with
``s >= 0``, so that every basis has exactly m basic variables out of n + m.
Phase 1 minimises the sum of bound violations of the basic variables (no big-M),
phase 2 the objective. The basis inverse is kept dense and updated in product
form; it is recomputed every ``refactor_frequency`` pivots.
"""

import collections
import enum
import logging

import numpy as np

from .model import FEAS_TOL

logger = logging.getLogger(__name__)

OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
ITERATION_LIMIT = 50000
BLAND_THRESHOLD = 1000
REFACTOR_FREQUENCY = 100

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT_REACHED = "iteration-limit"

# counters over all solves of the process
STATISTICS = collections.Counter()


class VarStatus(enum.IntEnum):
    BASIC = 0
    AT_LOWER = 1
    AT_UPPER = 2
    FREE = 3


class Basis:
    """status per variable (structural then slack) and the basic variable per row"""

    def __init__(self, status, basic_order):

        self.status = np.array(status, dtype=np.int8)
        self.basic_order = np.array(basic_order, dtype=int)

        n_basic = int(np.sum(self.status == VarStatus.BASIC))
        if n_basic != self.basic_order.size:
            msg = f"{n_basic} basic variables but {self.basic_order.size} basic rows"
            raise ValueError(msg)

        if np.any(self.status[self.basic_order] != VarStatus.BASIC):
            raise ValueError("basic_order lists a nonbasic variable")

    @property
    def num_rows(self):
        return self.basic_order.size

    def nonbasic(self):
        return np.flatnonzero(self.status != VarStatus.BASIC)

    def copy(self):
        return Basis(self.status.copy(), self.basic_order.copy())

    def __eq__(self, other):

        if not isinstance(other, Basis):
            return NotImplemented

        return np.array_equal(self.status, other.status) and np.array_equal(
            self.basic_order, other.basic_order
        )

    def __repr__(self):
        return f"<Basis rows={self.num_rows} basic={self.basic_order.tolist()}>"


class LpSolution:
    """result of ``solve_lp``

    ``x`` holds the n structural values followed by the m slack values.
    """

    def __init__(
        self,
        x,
        objective_value,
        basis,
        status,
        num_structural,
        iterations=0,
        warm_started=False,
    ):

        self.x = np.asarray(x, dtype=float)
        self.objective_value = objective_value
        self.basis = basis
        self.status = status
        self.num_structural = num_structural
        self.iterations = iterations
        self.warm_started = warm_started

    @property
    def values(self):
        """structural part of x"""
        return self.x[: self.num_structural]

    @property
    def slacks(self):
        return self.x[self.num_structural :]

    @property
    def is_optimal(self):
        return self.status == OPTIMAL

    def __repr__(self):
        return (
            f"<LpSolution {self.status} objective={self.objective_value} "
            f"iterations={self.iterations}>"
        )


class TableauRow:
    """one row of the simplex tableau in shift space

    ``x[basic_var] + coefficients @ shifts == rhs`` where the shift of a nonbasic
    variable is its distance to the active bound: ``x_j - l_j`` at lower,
    ``u_j - x_j`` at upper and ``x_j`` for free variables.
    """

    def __init__(self, basic_var, columns, coefficients, rhs):
        self.basic_var = basic_var
        self.columns = columns
        self.coefficients = coefficients
        self.rhs = rhs

    def __repr__(self):
        return f"<TableauRow basic={self.basic_var} rhs={self.rhs}>"


def _augmented(model):
    """[A | -I], b, bounds and costs of the slack-augmented standard form"""

    n, m = model.num_vars, model.num_rows

    M = np.hstack([model.A.toarray(), -np.eye(m)])
    lower = np.concatenate([model.lower, np.zeros(m)])
    upper = np.concatenate([model.upper, np.full(m, np.inf)])

    return M, np.array(model.rhs), lower, upper


def _nonbasic_values(status, lower, upper):

    values = np.zeros(status.size)

    at_lower = status == VarStatus.AT_LOWER
    at_upper = status == VarStatus.AT_UPPER
    values[at_lower] = lower[at_lower]
    values[at_upper] = upper[at_upper]

    return values


def _cold_status(lower, upper):

    status = np.full(lower.size, VarStatus.FREE, dtype=np.int8)
    status[np.isfinite(upper)] = VarStatus.AT_UPPER
    status[np.isfinite(lower)] = VarStatus.AT_LOWER

    return status


class BoundedSimplex:
    """single-use primal simplex solver for one model and one objective

    Parameters
    ----------
    model : MilpModel
        Model whose LP relaxation is solved; integrality marks are ignored.
    objective : array-like of float, optional
        Replaces ``model.objective``.
    iteration_limit : int, default: ITERATION_LIMIT
        Maximum number of pivots (bound flips included).
    bland_threshold : int, default: BLAND_THRESHOLD
        Pivots without objective improvement after which Bland's rule is used.
    refactor_frequency : int, default: REFACTOR_FREQUENCY
        Pivots between recomputations of the basis inverse.
    """

    def __init__(
        self,
        model,
        objective=None,
        iteration_limit=ITERATION_LIMIT,
        bland_threshold=BLAND_THRESHOLD,
        refactor_frequency=REFACTOR_FREQUENCY,
    ):

        n = model.num_vars

        if objective is None:
            objective = model.objective
        objective = np.asarray(objective, dtype=float)

        if objective.shape != (n,):
            raise ValueError(f"objective must have length {n}, found {objective.shape}")

        self.n = n
        self.m = model.num_rows
        self.M, self.b, self.lower, self.upper = _augmented(model)
        self.cost = np.concatenate([objective, np.zeros(self.m)])

        self.iteration_limit = iteration_limit
        self.bland_threshold = bland_threshold
        self.refactor_frequency = refactor_frequency

        self.status = None
        self.basic_order = None
        self.binv = None

        self.iterations = 0
        self.use_bland = False

    # ------------------------------------------------------------------------------
    # starting basis

    def _cold_start(self):

        status = _cold_status(self.lower, self.upper)
        status[self.n :] = VarStatus.BASIC

        self.status = status
        self.basic_order = np.arange(self.n, self.n + self.m)
        # basis matrix of the slacks is -I
        self.binv = -np.eye(self.m)

    def _try_warm_start(self, basis):
        """use ``basis`` if it fits the model, return success"""

        if basis is None:
            return False

        status = np.array(basis.status, dtype=np.int8)
        basic_order = np.array(basis.basic_order, dtype=int)

        if status.size != self.n + self.m or basic_order.size != self.m:
            return False

        at_lower = status == VarStatus.AT_LOWER
        at_upper = status == VarStatus.AT_UPPER
        free = status == VarStatus.FREE

        if not np.isfinite(self.lower[at_lower]).all():
            return False
        if not np.isfinite(self.upper[at_upper]).all():
            return False
        if np.isfinite(self.lower[free]).any() or np.isfinite(self.upper[free]).any():
            return False

        if np.any(status[basic_order] != VarStatus.BASIC):
            return False

        B = self.M[:, basic_order]
        if np.linalg.cond(B) > 1e12:
            return False

        try:
            binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False

        if not np.isfinite(binv).all():
            return False

        self.status = status
        self.basic_order = basic_order
        self.binv = binv

        return True

    def _refactor(self):
        self.binv = np.linalg.inv(self.M[:, self.basic_order])

    # ------------------------------------------------------------------------------
    # iteration

    def _values(self):

        x = _nonbasic_values(self.status, self.lower, self.upper)
        x[self.basic_order] = 0.0
        x[self.basic_order] = self.binv @ (self.b - self.M @ x)

        return x

    def _phase_costs(self, x):
        """costs of the basic variables in phase 1 (or None if primal feasible)"""

        xb = x[self.basic_order]
        lb = self.lower[self.basic_order]
        ub = self.upper[self.basic_order]

        below = xb < lb - FEAS_TOL
        above = xb > ub + FEAS_TOL

        if not (below.any() or above.any()):
            return None, 0.0

        costs = above.astype(float) - below.astype(float)
        infeasibility = np.sum((lb - xb)[below]) + np.sum((xb - ub)[above])

        return costs, infeasibility

    def _entering(self, d):

        status = self.status
        movable = self.upper > self.lower

        up = (status == VarStatus.AT_LOWER) & (d < -OPT_TOL)
        down = (status == VarStatus.AT_UPPER) & (d > OPT_TOL)
        free = (status == VarStatus.FREE) & (np.abs(d) > OPT_TOL)

        candidates = np.flatnonzero((up | down | free) & movable)

        if candidates.size == 0:
            return None, 0

        if self.use_bland:
            q = candidates[0]
        else:
            q = candidates[np.argmax(np.abs(d[candidates]))]

        direction = 1 if d[q] < 0 else -1

        return q, direction

    def _ratio_test(self, x, q, direction, phase1):
        """step length and leaving position (None for a bound flip)"""

        step = self.upper[q] - self.lower[q]
        leave, leave_status = None, None
        best_rate = 0.0

        alpha = self.binv @ self.M[:, q]
        rates = -direction * alpha

        for i in range(self.m):

            rate = rates[i]
            if abs(rate) <= PIVOT_TOL:
                continue

            j = self.basic_order[i]
            xb, lb, ub = x[j], self.lower[j], self.upper[j]

            if rate < 0:
                if phase1 and xb > ub + FEAS_TOL:
                    t, bound = (xb - ub) / -rate, VarStatus.AT_UPPER
                elif xb < lb - FEAS_TOL or not np.isfinite(lb):
                    continue
                else:
                    t, bound = (xb - lb) / -rate, VarStatus.AT_LOWER
            else:
                if phase1 and xb < lb - FEAS_TOL:
                    t, bound = (lb - xb) / rate, VarStatus.AT_LOWER
                elif xb > ub + FEAS_TOL or not np.isfinite(ub):
                    continue
                else:
                    t, bound = (ub - xb) / rate, VarStatus.AT_UPPER

            t = max(t, 0.0)

            if leave is None and t < step:
                better = True
            elif leave is not None and t < step - 1e-12:
                better = True
            elif leave is not None and abs(t - step) <= 1e-12:
                # ties: Bland takes the lowest variable index, else the largest pivot
                if self.use_bland:
                    better = j < self.basic_order[leave]
                else:
                    better = abs(rate) > best_rate
            else:
                better = False

            if better:
                step, leave, leave_status, best_rate = t, i, bound, abs(rate)

        return step, leave, leave_status, alpha

    def _pivot(self, q, leave, leave_status, alpha):

        leaving = self.basic_order[leave]

        self.status[leaving] = leave_status
        self.status[q] = VarStatus.BASIC
        self.basic_order[leave] = q

        row = self.binv[leave] / alpha[leave]
        self.binv -= np.outer(alpha, row)
        self.binv[leave] = row

    def _solve_without_rows(self):

        status = _cold_status(self.lower, self.upper)
        cost = self.cost

        unbounded = (
            (cost > OPT_TOL) & ~np.isfinite(self.lower)
            | (cost < -OPT_TOL) & ~np.isfinite(self.upper)
        )
        if unbounded.any():
            return UNBOUNDED, status

        status[(cost < -OPT_TOL)] = VarStatus.AT_UPPER
        status[(cost > OPT_TOL)] = VarStatus.AT_LOWER

        return OPTIMAL, status

    def solve(self, warm_basis=None):
        """run the simplex method

        Parameters
        ----------
        warm_basis : Basis, optional
            Starting basis. Falls back to the slack basis if it does not fit the
            model (counted in ``STATISTICS["rejected_warm"]``).

        Returns
        -------
        solution : LpSolution
        """

        if self.m == 0:
            result, status = self._solve_without_rows()
            x = _nonbasic_values(status, self.lower, self.upper)
            basis = Basis(status, [])
            return self._solution(x, basis, result, warm_started=False)

        warm_started = self._try_warm_start(warm_basis)

        if warm_started:
            STATISTICS["warm_starts"] += 1
        else:
            if warm_basis is not None:
                STATISTICS["rejected_warm"] += 1
                logger.warning("warm basis does not fit the model - cold start")
            STATISTICS["cold_starts"] += 1
            self._cold_start()

        best_objective = np.inf
        stalled = 0
        since_refactor = 0
        phase1_before = None

        while True:

            if since_refactor >= self.refactor_frequency:
                self._refactor()
                since_refactor = 0

            x = self._values()
            basic_costs, infeasibility = self._phase_costs(x)
            phase1 = basic_costs is not None

            if phase1:
                costs = np.zeros(self.n + self.m)
                costs[self.basic_order] = basic_costs
                objective = infeasibility
            else:
                costs = self.cost
                objective = costs @ x

            # progress is measured separately in each phase
            if phase1 != phase1_before:
                best_objective, stalled = np.inf, 0
                phase1_before = phase1

            if objective < best_objective - 1e-12:
                best_objective, stalled = objective, 0
            else:
                stalled += 1
                if stalled >= self.bland_threshold and not self.use_bland:
                    logger.debug("no progress for %d pivots - using Bland's rule", stalled)
                    STATISTICS["bland"] += 1
                    self.use_bland = True

            y = costs[self.basic_order] @ self.binv
            d = costs - y @ self.M
            d[self.basic_order] = 0.0

            q, direction = self._entering(d)

            if q is None:
                result = INFEASIBLE if phase1 else OPTIMAL
                break

            if self.iterations >= self.iteration_limit:
                result = ITERATION_LIMIT_REACHED
                break

            step, leave, leave_status, alpha = self._ratio_test(x, q, direction, phase1)

            if not np.isfinite(step):
                if phase1:
                    # cannot happen in exact arithmetic
                    logger.warning("phase 1 ray without breakpoint - reporting infeasible")
                    result = INFEASIBLE
                else:
                    result = UNBOUNDED
                break

            self.iterations += 1

            if leave is None:
                # bound flip of the entering variable
                if self.status[q] == VarStatus.AT_LOWER:
                    self.status[q] = VarStatus.AT_UPPER
                else:
                    self.status[q] = VarStatus.AT_LOWER
            else:
                self._pivot(q, leave, leave_status, alpha)
                since_refactor += 1

        x = self._values()
        basis = Basis(self.status.copy(), self.basic_order.copy())

        return self._solution(x, basis, result, warm_started, primal_feasible=not phase1)

    def _solution(self, x, basis, result, warm_started, primal_feasible=True):

        # stopped in phase 1: no feasible basis yet
        if result == ITERATION_LIMIT_REACHED and not primal_feasible:
            objective_value = np.inf
        elif result in (OPTIMAL, ITERATION_LIMIT_REACHED):
            objective_value = float(self.cost[: self.n] @ x[: self.n])
        elif result == UNBOUNDED:
            objective_value = -np.inf
        else:
            objective_value = np.inf

        logger.debug("LP %s after %d iterations", result, self.iterations)

        return LpSolution(
            x,
            objective_value,
            basis,
            result,
            self.n,
            iterations=self.iterations,
            warm_started=warm_started,
        )


def solve_lp(
    model,
    objective_override=None,
    warm_basis=None,
    iteration_limit=ITERATION_LIMIT,
    bland_threshold=BLAND_THRESHOLD,
):
    """solve the LP relaxation of ``model``

    Parameters
    ----------
    model : MilpModel
        Model without integrality marks (see ``lp_relaxation``).
    objective_override : array-like of float, optional
        Objective to minimise instead of ``model.objective``.
    warm_basis : Basis, optional
        Starting basis, e.g. of a previous solve of the same rows.
    iteration_limit : int, default: ITERATION_LIMIT
        Maximum number of simplex iterations.
    bland_threshold : int, default: BLAND_THRESHOLD
        Stalled pivots before switching to Bland's rule.

    Returns
    -------
    solution : LpSolution
    """

    if model.integer_indices.size:
        raise ValueError("solve_lp expects a relaxation - use 'lp_relaxation' first")

    solver = BoundedSimplex(
        model,
        objective=objective_override,
        iteration_limit=iteration_limit,
        bland_threshold=bland_threshold,
    )

    return solver.solve(warm_basis=warm_basis)


def tableau_row(model, sol, basic_row):
    """row ``basic_row`` of the simplex tableau at the basis of ``sol``

    Parameters
    ----------
    model : MilpModel
        Model ``sol`` was computed for (integrality marks are irrelevant).
    sol : LpSolution
        Optimal solution.
    basic_row : int
        Position in ``sol.basis.basic_order``.

    Returns
    -------
    row : TableauRow
        Coefficients over the nonbasic variables (structural and slack indices in
        ``columns``), expressed in shifts from the active bounds.
    """

    if sol.status != OPTIMAL:
        raise ValueError(f"tableau rows need an optimal solution, found '{sol.status}'")

    basis = sol.basis
    m = model.num_rows

    if basis.status.size != model.num_vars + m:
        raise ValueError("solution does not belong to this model")
    if not 0 <= basic_row < m:
        raise ValueError(f"basic_row must be in [0, {m}), found {basic_row}")

    M, b, lower, upper = _augmented(model)

    unit = np.zeros(m)
    unit[basic_row] = 1.0
    rho = np.linalg.solve(M[:, basis.basic_order].T, unit)
    full_row = rho @ M

    columns = basis.nonbasic()
    coefficients = full_row[columns]

    values = _nonbasic_values(basis.status, lower, upper)[columns]
    rhs = float(rho @ b - coefficients @ values)

    at_upper = basis.status[columns] == VarStatus.AT_UPPER
    coefficients = np.where(at_upper, -coefficients, coefficients)

    return TableauRow(int(basis.basic_order[basic_row]), columns, coefficients, rhs)
