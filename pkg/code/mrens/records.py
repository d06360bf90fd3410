"""records of heuristic calls and instance runs

The column tuples fix the order of the CSV reports.
"""

import dataclasses
import math

CALL_COLUMNS = (
    "instance_id",
    "seed",
    "mode",
    "status",
    "executed",
    "solution_found",
    "best_found",
    "fixing_rate",
    "total_fixing_rate",
    "nodes",
    "lp_iterations",
    "objective",
)

RUN_COLUMNS = (
    "instance_id",
    "seed",
    "mode",
    "status",
    "solved",
    "objective",
    "optimal_value",
    "time",
    "nodes",
    "lp_iterations",
    "heuristic_calls",
    "num_references",
    "refgen_status",
    "optimal_found",
)

WALL_TIME = "wall_time"


def _as_row(record, columns, wall_time):

    row = {col: getattr(record, col) for col in columns}
    if wall_time:
        row[WALL_TIME] = record.wall_time
    return row


@dataclasses.dataclass
class HeuristicCallRecord:
    """outcome of one RENS or MRENS call

    ``objective`` is NaN if no solution was found; ``fixing_rate`` is NaN if no
    neighborhood could be built. ``solution`` holds the solution in the space of
    the model the heuristic was called for; it is not reported.
    """

    instance_id: str
    seed: int
    mode: str
    status: str
    executed: bool = False
    solution_found: bool = False
    best_found: bool = False
    fixing_rate: float = math.nan
    total_fixing_rate: float = math.nan
    nodes: int = 0
    lp_iterations: int = 0
    objective: float = math.nan
    wall_time: float = dataclasses.field(default=0.0, compare=False)
    solution: object = dataclasses.field(default=None, repr=False, compare=False)

    def __post_init__(self):

        if self.best_found and not self.solution_found:
            raise ValueError("best_found requires solution_found")
        if self.solution_found and not self.executed:
            raise ValueError("solution_found requires executed")

    def as_row(self, wall_time=False):
        return _as_row(self, CALL_COLUMNS, wall_time)


@dataclasses.dataclass
class InstanceRunRecord:
    """outcome of one instance-seed run

    ``time`` is the work measure of the run: simplex iterations, or seconds if
    the experiment measures wall-clock time.
    """

    instance_id: str
    seed: int
    mode: str
    status: str
    solved: bool = False
    objective: float = math.nan
    optimal_value: float = math.nan
    time: float = 0.0
    nodes: int = 0
    lp_iterations: int = 0
    heuristic_calls: int = 0
    num_references: int = 0
    refgen_status: str = ""
    optimal_found: bool = False
    wall_time: float = dataclasses.field(default=0.0, compare=False)

    @property
    def key(self):
        return (self.instance_id, self.seed)

    def as_row(self, wall_time=False):
        return _as_row(self, RUN_COLUMNS, wall_time)
