# flake8: noqa

from . import gmi_cuts, lp_simplex, model, mps, neighborhood, presolve, reference_gen, subsolver
from .gmi_cuts import GmiCut, cut_violation, generate_gmi_round
from .lp_simplex import Basis, LpSolution, VarStatus, solve_lp, tableau_row
from .model import MilpModel, Solution, check_feasible, is_integral, lp_relaxation
from .mps import MPSParseError, parse_mps, read_mps, write_mps
from .neighborhood import (
    HeuristicGates,
    NeighborhoodBounds,
    build_submilp,
    execution_gate,
    fixing_rate,
    mrens_bounds,
    rens_bounds,
)
from .presolve import PresolveMapping, presolve
from .records import HeuristicCallRecord, InstanceRunRecord
from .reference_gen import (
    LagrangianState,
    RefGenConfig,
    ReferenceSet,
    lagrangian_objective,
    run_relax_and_cut,
    update_multipliers,
)
from .subsolver import SubsolveResult, WorkingLimits, branch_and_bound, run_heuristic_call
