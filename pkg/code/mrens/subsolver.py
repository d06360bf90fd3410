"""solving sub-MILPs: branch-and-bound under working limits and the heuristic call"""

import dataclasses
import heapq
import logging
import time

import numpy as np

from .lp_simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp
from .model import Solution, check_feasible, is_integral, lp_relaxation
from .neighborhood import (
    MRENS,
    RENS,
    HeuristicGates,
    build_submilp,
    execution_gate,
    fixing_rate,
    mrens_bounds,
    rens_bounds,
)
from .presolve import presolve
from .records import HeuristicCallRecord

logger = logging.getLogger(__name__)

# objective improvements smaller than this do not count
IMPROVEMENT_TOL = 1e-9

# branch-and-bound outcomes
OPTIMAL_STATUS = "optimal"
FEASIBLE_LIMIT_HIT = "feasible-limit-hit"
LIMIT_HIT = "limit-hit"
INFEASIBLE_STATUS = "infeasible"
UNBOUNDED_STATUS = "unbounded"

# outcomes of the heuristic call
ABORTED_FIXING_GATE = "aborted-fixing-gate"
ABORTED_INT_FIXING = "aborted-int-fixing"
NO_REFERENCE = "no-reference"
LIFT_REJECTED = "lift-rejected"


@dataclasses.dataclass(frozen=True)
class WorkingLimits:
    """limits of a sub-MILP solve; ``None`` disables a limit

    Parameters
    ----------
    node_limit : int, default: 5000
        Maximum number of processed nodes.
    stalling_node_limit : int, default: 500
        Maximum number of nodes processed without improving the incumbent.
    min_total_fixing_after_presolve : float, default: 0.25
        Minimum share of fixed variables (integer and continuous) after presolve.
    time_limit : float, optional
        Seconds.
    """

    node_limit: int = 5000
    stalling_node_limit: int = 500
    min_total_fixing_after_presolve: float = 0.25
    time_limit: float = None

    def __post_init__(self):

        for name in ("node_limit", "stalling_node_limit", "time_limit"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"'{name}' must be positive, found {value}")

        if not 0 <= self.min_total_fixing_after_presolve <= 1:
            raise ValueError("min_total_fixing_after_presolve must be in [0, 1]")

    @classmethod
    def unlimited(cls):
        return cls(
            node_limit=None,
            stalling_node_limit=None,
            min_total_fixing_after_presolve=0.0,
            time_limit=None,
        )


class SubsolveResult:
    """result of ``branch_and_bound``

    ``trace`` lists ``(node_id, stall_nodes, incumbent_value)`` after every
    processed node if requested.
    """

    def __init__(
        self,
        status,
        best_solution=None,
        nodes_processed=0,
        stall_nodes_at_end=0,
        lp_iterations=0,
        trace=None,
    ):

        if best_solution is not None and status in (INFEASIBLE_STATUS, LIMIT_HIT):
            raise ValueError(f"status '{status}' cannot have a solution")

        self.status = status
        self.best_solution = best_solution
        self.nodes_processed = nodes_processed
        self.stall_nodes_at_end = stall_nodes_at_end
        self.lp_iterations = lp_iterations
        self.trace = trace

    @property
    def objective_value(self):
        if self.best_solution is None:
            return np.inf
        return self.best_solution.objective_value

    def __repr__(self):
        return (
            f"<SubsolveResult {self.status}: objective={self.objective_value:.6g} "
            f"nodes={self.nodes_processed}>"
        )


def _branching_variable(x, integer_indices):
    """most fractional integer variable, lowest index on ties"""

    values = x[integer_indices]
    distance = np.abs(values - np.round(values))
    return integer_indices[np.argmax(distance)]


def _integral_solution(model, x):

    x = x.copy()
    idx = model.integer_indices
    x[idx] = np.round(x[idx])

    return Solution.from_values(model, x)


def branch_and_bound(model, limits=None, incumbent_cutoff=None, trace=False):
    """best-bound branch-and-bound

    Parameters
    ----------
    model : MilpModel
    limits : WorkingLimits, optional
        Default: ``WorkingLimits()``. The fixing gate is not checked here.
    incumbent_cutoff : float, optional
        Only solutions better than this value are accepted.
    trace : bool, default: False
        Record the node sequence in ``SubsolveResult.trace``.

    Returns
    -------
    result : SubsolveResult
        Status "optimal" (tree exhausted with a solution), "infeasible" (tree
        exhausted without one), "feasible-limit-hit" / "limit-hit" (a limit stopped
        the search with / without a solution) or "unbounded". A node whose LP stops
        at its iteration limit is dropped and the search reports a limit status.
    """

    if limits is None:
        limits = WorkingLimits()

    start = time.perf_counter()

    relaxation = lp_relaxation(model)
    cutoff = np.inf if incumbent_cutoff is None else incumbent_cutoff

    incumbent = None
    incumbent_value = np.inf

    # (bound, node id, lower, upper, parent basis)
    heap = [(-np.inf, 1, np.array(model.lower), np.array(model.upper), None)]
    next_id = 2

    nodes = 0
    stall = 0
    lp_iterations = 0
    node_trace = list() if trace else None
    stopped = False
    # a dropped node leaves part of the tree unexplored
    incomplete = False

    while heap:

        if limits.node_limit is not None and nodes >= limits.node_limit:
            logger.debug("node limit of %d reached", limits.node_limit)
            stopped = True
            break

        if (
            limits.stalling_node_limit is not None
            and incumbent is not None
            and stall >= limits.stalling_node_limit
        ):
            logger.debug("%d nodes without improvement - stopping", stall)
            stopped = True
            break

        if (
            limits.time_limit is not None
            and time.perf_counter() - start >= limits.time_limit
        ):
            logger.debug("time limit reached")
            stopped = True
            break

        bound, node_id, lower, upper, basis = heapq.heappop(heap)

        if bound >= min(cutoff, incumbent_value) - IMPROVEMENT_TOL:
            continue

        nodes += 1
        stall += 1

        sol = solve_lp(relaxation.with_bounds(lower, upper), warm_basis=basis)
        lp_iterations += sol.iterations

        if sol.status == UNBOUNDED:
            logger.debug("node %d: LP relaxation unbounded", node_id)
            return SubsolveResult(UNBOUNDED_STATUS, None, nodes, stall, lp_iterations, node_trace)

        if sol.status == INFEASIBLE:
            pass
        elif sol.status != OPTIMAL:
            logger.warning("node %d: LP status '%s' - node dropped", node_id, sol.status)
            incomplete = True
        elif sol.objective_value >= min(cutoff, incumbent_value) - IMPROVEMENT_TOL:
            pass
        elif is_integral(sol.values, model.integer_indices):

            candidate = _integral_solution(model, sol.values)

            if candidate.objective_value < incumbent_value - IMPROVEMENT_TOL:
                incumbent = candidate
                incumbent_value = candidate.objective_value
                stall = 0
                logger.debug("node %d: new incumbent %.6g", node_id, incumbent_value)
        else:

            j = _branching_variable(sol.values, model.integer_indices)
            value = sol.values[j]

            down = upper.copy()
            down[j] = np.floor(value)
            up = lower.copy()
            up[j] = np.ceil(value)

            heapq.heappush(heap, (sol.objective_value, next_id, lower, down, sol.basis))
            heapq.heappush(heap, (sol.objective_value, next_id + 1, up, upper, sol.basis))
            next_id += 2

        if trace:
            node_trace.append((node_id, stall, incumbent_value))

    if stopped or incomplete:
        status = FEASIBLE_LIMIT_HIT if incumbent is not None else LIMIT_HIT
    else:
        status = OPTIMAL_STATUS if incumbent is not None else INFEASIBLE_STATUS

    logger.debug("branch-and-bound: %s after %d nodes", status, nodes)

    return SubsolveResult(status, incumbent, nodes, stall, lp_iterations, node_trace)


def _reference_bounds(model, refs, mode):

    if mode == RENS:
        return rens_bounds(model, refs.root)
    if mode == MRENS:
        return mrens_bounds(model, refs.selected)

    raise ValueError(f"mode must be '{RENS}' or '{MRENS}', found {mode}")


def run_heuristic_call(
    model,
    refs,
    mode,
    limits=None,
    gates=None,
    incumbent_cutoff=None,
    instance_id=None,
    seed=0,
):
    """run RENS or MRENS once

    Parameters
    ----------
    model : MilpModel
    refs : ReferenceSet
        References of ``model``; RENS uses the LP optimum only, MRENS the selected
        references.
    mode : {"rens", "mrens"}
    limits : WorkingLimits, optional
    gates : HeuristicGates, optional
    incumbent_cutoff : float, optional
        Objective value the sub-MILP solution has to improve.
    instance_id : str, optional
        Stored in the record. Default: ``model.name``.
    seed : int, default: 0
        Stored in the record.

    Returns
    -------
    record : HeuristicCallRecord
        The lifted solution is available as ``record.solution`` (None if no
        solution was found).
    """

    if limits is None:
        limits = WorkingLimits()
    if gates is None:
        gates = HeuristicGates()
    if instance_id is None:
        instance_id = model.name

    start = time.perf_counter()

    def _record(status, **kwargs):
        record = HeuristicCallRecord(instance_id, seed, mode, status, **kwargs)
        record.wall_time = time.perf_counter() - start
        return record

    if refs.root is None:
        return _record(NO_REFERENCE)

    bounds = _reference_bounds(model, refs, mode)
    rate = fixing_rate(bounds, model)

    if not execution_gate(bounds, model, gates.min_int_fixing):
        logger.debug("%s: %.1f%% integer fixings - not executed", mode, 100 * rate)
        return _record(ABORTED_INT_FIXING, fixing_rate=rate)

    submilp = build_submilp(model, bounds)
    reduced, total_rate, mapping = presolve(submilp)

    if mapping.infeasible:
        return _record(
            INFEASIBLE_STATUS, executed=True, fixing_rate=rate, total_fixing_rate=total_rate
        )

    if total_rate < limits.min_total_fixing_after_presolve:
        logger.debug("%s: %.1f%% total fixings after presolve - aborted", mode, 100 * total_rate)
        return _record(
            ABORTED_FIXING_GATE,
            executed=True,
            fixing_rate=rate,
            total_fixing_rate=total_rate,
        )

    cutoff = None if incumbent_cutoff is None else incumbent_cutoff - mapping.offset
    result = branch_and_bound(reduced, limits, incumbent_cutoff=cutoff)

    common = dict(
        executed=True,
        fixing_rate=rate,
        total_fixing_rate=total_rate,
        nodes=result.nodes_processed,
        lp_iterations=result.lp_iterations,
    )

    if result.best_solution is None:
        return _record(result.status, **common)

    x = mapping.lift(result.best_solution.values)

    if not check_feasible(model, x):
        logger.warning("%s: lifted solution violates the original model", mode)
        return _record(LIFT_REJECTED, **common)

    return _record(
        result.status,
        solution_found=True,
        objective=float(model.objective @ x),
        solution=x,
        **common,
    )
