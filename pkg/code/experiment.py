import dataclasses
import logging
import math
import sys
import time

import docopt
import numpy as np

import conf
import report
from mrens import (
    HeuristicGates,
    InstanceRunRecord,
    MPSParseError,
    RefGenConfig,
    WorkingLimits,
    branch_and_bound,
    read_mps,
    run_heuristic_call,
    run_relax_and_cut,
)
from mrens.subsolver import (
    FEASIBLE_LIMIT_HIT,
    IMPROVEMENT_TOL,
    INFEASIBLE_STATUS,
    LIMIT_HIT,
    OPTIMAL_STATUS,
)
from utils import find_instances

logger = logging.getLogger(__name__)

OFF = "off"
ERROR = "error"

SOLVED = (OPTIMAL_STATUS, INFEASIBLE_STATUS)

SEED_REALIZATION = (
    "seed 0 keeps the variable order; seed s > 0 permutes the variables with "
    "numpy.random.default_rng(s).permutation"
)

# =============================================================================
# one instance-seed run
# =============================================================================


def seed_permutation(num_vars, seed):
    """variable order of a seed; seed 0 is the identity"""

    if seed == 0:
        return np.arange(num_vars)

    return np.random.default_rng(seed).permutation(num_vars)


def _full_solve(model, best_known, node_limit):
    """solve the instance to optimality, seeded with the best known value"""

    limits = WorkingLimits(
        node_limit=node_limit,
        stalling_node_limit=None,
        min_total_fixing_after_presolve=0.0,
        time_limit=None,
    )

    cutoff = None if math.isinf(best_known) else best_known
    result = branch_and_bound(model, limits, incumbent_cutoff=cutoff)

    if result.best_solution is not None:
        return result, result.status, result.objective_value

    if cutoff is None:
        return result, result.status, math.nan

    # nothing better than the best known solution
    status = {INFEASIBLE_STATUS: OPTIMAL_STATUS, LIMIT_HIT: FEASIBLE_LIMIT_HIT}
    return result, status.get(result.status, result.status), best_known


def run_instance(
    model,
    seed,
    mode,
    limits=None,
    gates=None,
    refgen_config=None,
    full_solve_node_limit=conf.FULL_SOLVE_NODE_LIMIT,
    wall_clock=False,
):
    """run reference generation, the heuristic call and the full solve

    Parameters
    ----------
    model : MilpModel
        The instance in its original variable order.
    seed : int
        Selects the variable permutation.
    mode : {"rens", "mrens", "off"}
        Heuristic called after the reference generation; "off" calls none.
    limits : WorkingLimits, optional
    gates : HeuristicGates, optional
    refgen_config : RefGenConfig, optional
    full_solve_node_limit : int, default: conf.FULL_SOLVE_NODE_LIMIT
    wall_clock : bool, default: False
        Measure the run time in seconds instead of simplex iterations.

    Returns
    -------
    calls : list of HeuristicCallRecord
    run : InstanceRunRecord
    """

    start = time.perf_counter()

    permuted = model.permute(seed_permutation(model.num_vars, seed))

    refs = run_relax_and_cut(permuted, refgen_config)
    lp_iterations = refs.lp_iterations

    best = refs.best_integral
    best_known = math.inf if best is None else best.objective_value

    calls = list()
    if mode != OFF:

        cutoff = None if math.isinf(best_known) else best_known
        record = run_heuristic_call(
            permuted,
            refs,
            mode,
            limits,
            gates,
            incumbent_cutoff=cutoff,
            instance_id=model.name,
            seed=seed,
        )

        if record.solution_found and record.objective < best_known - IMPROVEMENT_TOL:
            record = dataclasses.replace(record, best_found=True)
            best_known = record.objective

        lp_iterations += record.lp_iterations
        calls.append(record)

    result, status, objective = _full_solve(permuted, best_known, full_solve_node_limit)
    lp_iterations += result.lp_iterations

    optimal_value = objective if status == OPTIMAL_STATUS else math.nan
    optimal_found = any(
        call.solution_found and abs(call.objective - optimal_value) <= conf.OBJECTIVE_TOL
        for call in calls
    )

    elapsed = time.perf_counter() - start

    run = InstanceRunRecord(
        model.name,
        seed,
        mode,
        status,
        solved=status in SOLVED,
        objective=objective,
        optimal_value=optimal_value,
        time=elapsed if wall_clock else lp_iterations,
        nodes=result.nodes_processed,
        lp_iterations=lp_iterations,
        heuristic_calls=len(calls),
        num_references=len(refs.selected),
        refgen_status=refs.status,
        optimal_found=optimal_found,
        wall_time=elapsed,
    )

    return calls, run


# =============================================================================
# experiment
# =============================================================================


def _experiment_info(names, seeds, mode, limits, gates, refgen_config, node_limit, wall_clock):

    return {
        "instances": list(names),
        "seeds": [int(seed) for seed in seeds],
        "mode": mode,
        "working_limits": dataclasses.asdict(limits),
        "gates": dataclasses.asdict(gates),
        "refgen": dataclasses.asdict(refgen_config),
        "full_solve_node_limit": node_limit,
        "seed_realization": SEED_REALIZATION,
        "time": "seconds" if wall_clock else "simplex iterations",
    }


def run_experiment(
    instances,
    seeds=conf.SEEDS,
    mode="mrens",
    limits=None,
    refgen_config=None,
    gates=None,
    full_solve_node_limit=conf.FULL_SOLVE_NODE_LIMIT,
    wall_clock=False,
):
    """solve every instance with every seed

    Parameters
    ----------
    instances : list of MilpModel
        Instances with unique names.
    seeds : list of int, default: conf.SEEDS
    mode : {"rens", "mrens", "off"}, default: "mrens"
    limits : WorkingLimits, optional
        Working limits of the heuristic call.
    refgen_config : RefGenConfig, optional
    gates : HeuristicGates, optional
    full_solve_node_limit : int, default: conf.FULL_SOLVE_NODE_LIMIT
    wall_clock : bool, default: False
        Report seconds instead of simplex iterations as time.

    Returns
    -------
    metrics : RunMetrics
        A failing run is recorded with status "error" and does not stop the
        experiment.
    """

    if mode not in conf.MODES:
        raise ValueError(f"mode must be one of {conf.MODES}, found {mode}")

    names = [model.name for model in instances]
    if len(set(names)) != len(names):
        raise ValueError(f"instance names must be unique, found {names}")

    limits = WorkingLimits() if limits is None else limits
    gates = HeuristicGates() if gates is None else gates
    refgen_config = RefGenConfig() if refgen_config is None else refgen_config

    all_calls = list()
    all_runs = list()

    n_runs = len(instances) * len(seeds)
    i = 0
    for model in instances:
        for seed in seeds:
            i += 1
            logger.info("processing %d of %d: %s (seed %d)", i, n_runs, model.name, seed)

            try:
                calls, run = run_instance(
                    model,
                    seed,
                    mode,
                    limits,
                    gates,
                    refgen_config,
                    full_solve_node_limit,
                    wall_clock,
                )
            except Exception:
                logger.exception("run of '%s' with seed %d failed", model.name, seed)
                calls, run = [], InstanceRunRecord(model.name, seed, mode, ERROR)

            all_calls += calls
            all_runs.append(run)

    info = _experiment_info(
        names, seeds, mode, limits, gates, refgen_config, full_solve_node_limit, wall_clock
    )

    return report.RunMetrics(all_calls, all_runs, info)


def load_instances(paths):
    """find and parse the instance files"""

    files = find_instances(paths)

    instances = list()
    for filename in files.filename:
        logger.info("reading '%s'", filename)
        instances.append(read_mps(filename))

    return instances


# =============================================================================
# main
# =============================================================================


def _parse_seeds(seeds):

    try:
        return [int(seed) for seed in seeds.split(",")]
    except ValueError:
        raise docopt.DocoptExit(f"seeds must be comma-separated integers, found '{seeds}'")


def _optional(value, convert):
    return None if value is None else convert(value)


def solve(options):

    mode = options["--mode"]
    if mode not in conf.MODES:
        raise docopt.DocoptExit(f"mode must be one of {', '.join(conf.MODES)}")

    seeds = _parse_seeds(options["--seeds"])

    limits = WorkingLimits(
        node_limit=int(options["--node-limit"]),
        stalling_node_limit=int(options["--stall-limit"]),
        min_total_fixing_after_presolve=float(options["--min-total-fixing"]),
        time_limit=_optional(options["--time-limit"], float),
    )
    gates = HeuristicGates(min_int_fixing=float(options["--min-int-fixing"]))
    refgen_config = RefGenConfig(max_iterations=int(options["--refgen-iters"]))

    out = options["--out"]
    if out is None:
        out = conf.results_filename(mode)

    try:
        instances = load_instances(options["<file>"])
    except MPSParseError as err:
        logger.error("could not parse instance: %s", err)
        return 2

    wall_clock = options["--wall-clock"]

    metrics = run_experiment(
        instances,
        seeds,
        mode,
        limits,
        refgen_config,
        gates,
        wall_clock=wall_clock,
    )

    report.write_results(metrics, out, wall_time=wall_clock)

    print(report.format_table(metrics.call_statistics(), floatfmt=".1f"))
    print()
    print(report.format_table(metrics.run_statistics()))

    return 0


def compare(options):

    a = report.read_results(options["<dir_a>"])
    b = report.read_results(options["<dir_b>"])

    try:
        df = report.categorize_and_compare(a, b)
    except ValueError as err:
        logger.error("%s", err)
        return 1

    print(report.format_table(df))

    return 0


def main(args=None):
    """
    experiment.py
    Usage:
      experiment.py solve <file>... [options]
      experiment.py compare <dir_a> <dir_b> [--verbose]
      experiment.py -h | --help

    Options:
      --mode=<mode>           Heuristic: rens, mrens or off [default: mrens].
      --seeds=<seeds>         Comma-separated seeds [default: 0,1,2,3,4].
      --node-limit=<n>        Node limit of the sub-MILP [default: 5000].
      --stall-limit=<n>       Stalling node limit of the sub-MILP [default: 500].
      --min-int-fixing=<r>    Minimum share of fixed integer variables [default: 0.5].
      --min-total-fixing=<r>  Minimum share of fixed variables after presolve [default: 0.25].
      --refgen-iters=<n>      Iterations of the relax-and-cut loop [default: 20].
      --time-limit=<s>        Time limit of the sub-MILP in seconds.
      --out=<dir>             Output folder. Default: ../results/<mode>/.
      --wall-clock            Report seconds instead of simplex iterations.
      --verbose               Show debug messages.

    Examples:
      experiment.py solve ../instances/ --mode rens --seeds 0,1
      experiment.py compare ../results/rens ../results/mrens
    """

    # parse cmd line arguments
    options = docopt.docopt(main.__doc__, argv=args, version=None)

    level = logging.DEBUG if options["--verbose"] else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    if options["solve"]:
        return solve(options)

    return compare(options)


if __name__ == "__main__":
    sys.exit(main())
