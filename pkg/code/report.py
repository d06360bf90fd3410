"""aggregation and reporting of experiment records

Call statistics summarize the heuristic calls per mode. Comparisons relate the
instance runs of two settings on the same instance-seed universe.
"""

import json
import logging
import math
import os

import numpy as np
import pandas as pd
import yaml
from tabulate import tabulate

import conf
from mrens.records import (
    CALL_COLUMNS,
    RUN_COLUMNS,
    WALL_TIME,
    HeuristicCallRecord,
    InstanceRunRecord,
)
from utils import (
    match_records,
    mkdir,
    percentage,
    relative_quotient,
    select_by_attributes,
    shifted_geomean,
)

logger = logging.getLogger(__name__)

CALL_STATISTICS = ("calls", "executed", "solution_found", "best_found", "fixing")
RUN_STATISTICS = ("runs", "solved", "errors", "time", "nodes", "optimal_found")
COMPARISON_COLUMNS = (
    "instances",
    "solved_a",
    "solved_b",
    "time_a",
    "time_b",
    "time_quotient",
    "nodes_a",
    "nodes_b",
    "nodes_quotient",
)


def _sort_key(record):
    return (record.instance_id, record.seed)


def _modes(records):
    return sorted(set(record.mode for record in records))


def _nan_to_none(value):

    if isinstance(value, float) and math.isnan(value):
        return None
    return value


class RunMetrics:
    """heuristic calls and instance runs of one or several experiments

    Records are kept sorted by (instance, seed); aggregation is a pure function of
    the records.

    Parameters
    ----------
    calls : iterable of HeuristicCallRecord
    runs : iterable of InstanceRunRecord
    info : dict, optional
        Description of the experiment (written to the run-info file).
    """

    def __init__(self, calls=(), runs=(), info=None):

        self.calls = sorted(calls, key=_sort_key)
        self.runs = sorted(runs, key=_sort_key)
        self.info = dict() if info is None else dict(info)

    @property
    def keys(self):
        """instance-seed pairs of the runs"""
        return [run.key for run in self.runs]

    def calls_df(self, wall_time=False):

        rows = [call.as_row(wall_time=wall_time) for call in self.calls]
        columns = CALL_COLUMNS + ((WALL_TIME,) if wall_time else ())
        return pd.DataFrame(rows, columns=list(columns))

    def runs_df(self, wall_time=False):

        rows = [run.as_row(wall_time=wall_time) for run in self.runs]
        columns = RUN_COLUMNS + ((WALL_TIME,) if wall_time else ())
        return pd.DataFrame(rows, columns=list(columns))

    def call_statistics(self):
        """per-mode statistics of the heuristic calls

        Returns
        -------
        df : pd.DataFrame
            One row per mode with the number of calls and the percentage of calls
            that were executed, found a solution and found a new best solution,
            and the mean fixing rate (in %) of the calls with a neighborhood.
        """

        out = dict()
        for mode in _modes(self.calls):
            out[mode] = aggregate_calls(select_by_attributes(self.calls, mode=mode))

        return pd.DataFrame.from_dict(
            out, orient="index", columns=list(CALL_STATISTICS)
        )

    def run_statistics(self, time_shift=conf.TIME_SHIFT, node_shift=conf.NODE_SHIFT):
        """per-mode statistics of the instance runs"""

        out = dict()
        for mode in _modes(self.runs):
            runs = select_by_attributes(self.runs, mode=mode)
            out[mode] = aggregate_runs(runs, time_shift, node_shift)

        return pd.DataFrame.from_dict(out, orient="index", columns=list(RUN_STATISTICS))

    def summary(self):
        """JSON-serializable summary of the call and run statistics"""

        def _to_dict(df):
            return {
                mode: {key: _nan_to_none(value) for key, value in row.items()}
                for mode, row in df.astype(object).to_dict(orient="index").items()
            }

        return {
            "calls": _to_dict(self.call_statistics()),
            "runs": _to_dict(self.run_statistics()),
        }

    def __len__(self):
        return len(self.runs)

    def __repr__(self):
        return f"<RunMetrics: {len(self.runs)} runs, {len(self.calls)} heuristic calls>"


def aggregate_calls(calls):
    """statistics of a list of call records"""

    calls = list(calls)

    fixing = [c.fixing_rate for c in calls if not math.isnan(c.fixing_rate)]

    return {
        "calls": len(calls),
        "executed": float(percentage([c.executed for c in calls])),
        "solution_found": float(percentage([c.solution_found for c in calls])),
        "best_found": float(percentage([c.best_found for c in calls])),
        "fixing": float(100 * np.mean(fixing)) if fixing else math.nan,
    }


def _geomean(values, shift):

    if len(values) == 0:
        return math.nan
    return shifted_geomean(values, shift)


def aggregate_runs(runs, time_shift=conf.TIME_SHIFT, node_shift=conf.NODE_SHIFT):
    """aggregate statistics of a list of run records"""

    runs = list(runs)

    return {
        "runs": len(runs),
        "solved": sum(bool(r.solved) for r in runs),
        "errors": sum(r.status == "error" for r in runs),
        "time": _geomean([r.time for r in runs], time_shift),
        "nodes": _geomean([r.nodes for r in runs], node_shift),
        "optimal_found": sum(bool(r.optimal_found) for r in runs),
    }


# =============================================================================
# comparison of two settings
# =============================================================================


def _call_stream(calls, key):
    """call rows of one instance-seed pair without the mode"""

    instance_id, seed = key
    selected = select_by_attributes(calls, instance_id=instance_id, seed=seed)

    return [
        tuple(_nan_to_none(value) for col, value in call.as_row().items() if col != "mode")
        for call in selected
    ]


def _check_universe(a, b):

    keys_a, keys_b = a.keys, b.keys

    if len(set(keys_a)) != len(keys_a) or len(set(keys_b)) != len(keys_b):
        raise ValueError("instance-seed pairs must be unique within one setting")

    if set(keys_a) != set(keys_b):
        only_a = sorted(set(keys_a) - set(keys_b))
        only_b = sorted(set(keys_b) - set(keys_a))
        raise ValueError(
            "settings must cover the same instance-seed pairs; "
            f"only in a: {only_a}, only in b: {only_b}"
        )


def affected_keys(a, b):
    """instance-seed pairs whose solving behavior differs between the settings

    A pair is affected if the number of branch-and-bound nodes or the
    heuristic-call records (mode excluded) differ.
    """

    _check_universe(a, b)

    runs_a, runs_b = match_records(a.runs, b.runs)

    affected = list()
    for run_a, run_b in zip(runs_a, runs_b):
        if run_a.nodes != run_b.nodes or _call_stream(a.calls, run_a.key) != _call_stream(
            b.calls, run_b.key
        ):
            affected.append(run_a.key)

    return affected


def categorize_and_compare(a, b, time_shift=conf.TIME_SHIFT, node_shift=conf.NODE_SHIFT):
    """compare the instance runs of two settings

    Parameters
    ----------
    a, b : RunMetrics
        Results of the two settings on the same instance-seed pairs.
    time_shift : float, default: conf.TIME_SHIFT
        Shift of the geometric mean of the time.
    node_shift : float, default: conf.NODE_SHIFT
        Shift of the geometric mean of the nodes.

    Returns
    -------
    df : pd.DataFrame
        Rows "all", "both-solved", "affected" and "affected-solved"; columns number
        of instances, solved runs per setting, shifted geometric means of time and
        nodes per setting and their quotients a / b. Means of empty sets are NaN.
    """

    affected = set(affected_keys(a, b))

    runs_a, runs_b = match_records(a.runs, b.runs)
    both_solved = {
        ra.key for ra, rb in zip(runs_a, runs_b) if ra.solved and rb.solved
    }

    sets = {
        "all": set(a.keys),
        "both-solved": both_solved,
        "affected": affected,
        "affected-solved": affected & both_solved,
    }

    rows = dict()
    for name in conf.COMPARISON_SETS:
        keys = sets[name]

        sel_a = [r for r in runs_a if r.key in keys]
        sel_b = [r for r in runs_b if r.key in keys]

        time_a = _geomean([r.time for r in sel_a], time_shift)
        time_b = _geomean([r.time for r in sel_b], time_shift)
        nodes_a = _geomean([r.nodes for r in sel_a], node_shift)
        nodes_b = _geomean([r.nodes for r in sel_b], node_shift)

        rows[name] = (
            len(keys),
            sum(bool(r.solved) for r in sel_a),
            sum(bool(r.solved) for r in sel_b),
            time_a,
            time_b,
            relative_quotient(time_a, time_b),
            nodes_a,
            nodes_b,
            relative_quotient(nodes_a, nodes_b),
        )

    return pd.DataFrame.from_dict(rows, orient="index", columns=list(COMPARISON_COLUMNS))


def format_table(df, floatfmt=".2f"):
    """render a statistics table as text; NaN is shown as '-'"""

    df = df.astype(object).where(df.notna(), None)

    return tabulate(df, headers="keys", floatfmt=floatfmt, missingval="-")


# =============================================================================
# files
# =============================================================================


def _result_files(folder):

    return {
        "calls": os.path.join(folder, conf.CALLS_FILE),
        "runs": os.path.join(folder, conf.RUNS_FILE),
        "summary": os.path.join(folder, conf.SUMMARY_FILE),
        "info": os.path.join(folder, conf.RUN_INFO_FILE),
    }


def write_results(metrics, folder, wall_time=False):
    """write the records and the summary of an experiment

    Creates ``calls.csv`` (one row per heuristic call), ``runs.csv`` (one row per
    instance run), ``summary.json`` and ``run_info.yml`` in ``folder``. The output
    only depends on the records unless ``wall_time`` is True.
    """

    mkdir(folder)
    files = _result_files(folder)

    metrics.calls_df(wall_time=wall_time).to_csv(files["calls"], index=False)
    metrics.runs_df(wall_time=wall_time).to_csv(files["runs"], index=False)

    with open(files["summary"], "w") as f:
        json.dump(metrics.summary(), f, indent=2, sort_keys=True)
        f.write("\n")

    with open(files["info"], "w") as f:
        yaml.safe_dump(metrics.info, f)

    logger.info("wrote results to '%s'", folder)

    return files


def _read_records(filename, cls, columns, text_columns):

    dtype = {col: str for col in text_columns}
    df = pd.read_csv(
        filename,
        dtype=dtype,
        keep_default_na=False,
        na_values=[""],
        float_precision="round_trip",
    )

    for col in text_columns:
        df[col] = df[col].fillna("")

    fields = [col for col in df.columns if col in columns]

    records = list()
    for row in df[fields].to_dict(orient="records"):
        records.append(cls(**row))

    return records


def read_results(folder):
    """read the records written by ``write_results``

    Returns
    -------
    metrics : RunMetrics
    """

    files = _result_files(folder)

    calls = _read_records(
        files["calls"], HeuristicCallRecord, CALL_COLUMNS, ("instance_id", "mode", "status")
    )
    runs = _read_records(
        files["runs"],
        InstanceRunRecord,
        RUN_COLUMNS,
        ("instance_id", "mode", "status", "refgen_status"),
    )

    info = None
    if os.path.isfile(files["info"]):
        with open(files["info"]) as f:
            info = yaml.safe_load(f)

    return RunMetrics(calls, runs, info)
