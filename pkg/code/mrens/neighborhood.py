import dataclasses
import logging

import numpy as np

from .model import FEAS_TOL, INT_TOL, check_feasible, lp_relaxation
from .reference_gen import MAX_REFERENCES

logger = logging.getLogger(__name__)

RENS = "rens"
MRENS = "mrens"

# variables whose references spread at least this much are rounded inwards
MIN_SPREAD = 1.0


@dataclasses.dataclass(frozen=True)
class HeuristicGates:
    """minimum share of fixed integer variables for the heuristic to run"""

    min_int_fixing: float = 0.5

    def __post_init__(self):
        if not 0 <= self.min_int_fixing <= 1:
            raise ValueError("min_int_fixing must be in [0, 1]")


class NeighborhoodBounds:
    """intervals of the integer variables defining a sub-MILP

    Parameters
    ----------
    var_lower, var_upper : array-like of float
        Integral bounds, one per entry of ``integer_indices``.
    integer_indices : array-like of int
        Integer variables of the model, in the order of the bounds.
    mode : {"rens", "mrens"}
    """

    def __init__(self, var_lower, var_upper, integer_indices, mode):

        self.var_lower = np.asarray(var_lower, dtype=float)
        self.var_upper = np.asarray(var_upper, dtype=float)
        self.integer_indices = np.asarray(integer_indices, dtype=int)
        self.mode = mode

        if mode not in (RENS, MRENS):
            raise ValueError(f"mode must be '{RENS}' or '{MRENS}', found {mode}")

        if np.any(self.var_lower > self.var_upper):
            raise ValueError("neighborhood interval is empty")

    @property
    def fixed_count(self):
        return int(np.sum(self.var_lower == self.var_upper))

    def __repr__(self):
        n = self.integer_indices.size
        return f"<NeighborhoodBounds {self.mode}: {self.fixed_count} of {n} fixed>"


def _snap(values):
    """move values within INT_TOL of an integer onto it"""

    rounded = np.round(values)
    return np.where(np.abs(values - rounded) <= INT_TOL, rounded, values)


def _check_reference(model, x):

    x = np.asarray(x, dtype=float)

    if x.shape != (model.num_vars,):
        raise ValueError(f"expected a reference of length {model.num_vars}, found {x.shape}")

    if not np.isfinite(x).all():
        raise ValueError("reference contains non-finite values")

    if not check_feasible(lp_relaxation(model), x, tol=FEAS_TOL):
        raise ValueError("reference is not feasible for the LP relaxation")

    return x


def _intersect(model, lower, upper, mode):

    idx = model.integer_indices
    lower = np.maximum(lower, model.lower[idx])
    upper = np.minimum(upper, model.upper[idx])

    return NeighborhoodBounds(lower, upper, idx, mode)


def rens_bounds(model, x0):
    """floor and ceiling of one reference for every integer variable

    Integral values (within INT_TOL) fix the variable. The intervals are intersected
    with the model bounds.
    """

    x0 = _check_reference(model, x0)
    values = _snap(x0[model.integer_indices])

    return _intersect(model, np.floor(values), np.ceil(values), RENS)


def mrens_bounds(model, refs):
    """intervals spanned by one to three references

    Parameters
    ----------
    model : MilpModel
    refs : list of array-like
        LP feasible references.

    Returns
    -------
    bounds : NeighborhoodBounds
        Per integer variable with smallest and largest reference value vmin, vmax:
        ``[ceil(vmin), floor(vmax)]`` if ``vmax - vmin >= 1``, otherwise
        ``[floor(vmin), ceil(vmax)]``; intersected with the model bounds.
    """

    refs = list(refs)

    if not refs:
        raise ValueError("at least one reference is needed")
    if len(refs) > MAX_REFERENCES:
        raise ValueError(f"at most {MAX_REFERENCES} references, found {len(refs)}")

    refs = [_check_reference(model, x) for x in refs]
    values = _snap(np.stack(refs)[:, model.integer_indices])

    vmin = values.min(axis=0)
    vmax = values.max(axis=0)
    wide = vmax - vmin >= MIN_SPREAD

    lower = np.where(wide, np.ceil(vmin), np.floor(vmin))
    upper = np.where(wide, np.floor(vmax), np.ceil(vmax))

    return _intersect(model, lower, upper, MRENS)


def fixing_rate(bounds, model):
    """share of integer variables fixed by the neighborhood (1.0 without integers)"""

    n_int = model.integer_indices.size

    if bounds.integer_indices.size != n_int:
        raise ValueError("bounds were not built for this model")

    if n_int == 0:
        return 1.0

    return bounds.fixed_count / n_int


def build_submilp(model, bounds):
    """the model with the integer variables restricted to the neighborhood"""

    if not np.array_equal(bounds.integer_indices, model.integer_indices):
        raise ValueError("bounds were not built for this model")

    lower = np.array(model.lower)
    upper = np.array(model.upper)

    lower[bounds.integer_indices] = bounds.var_lower
    upper[bounds.integer_indices] = bounds.var_upper

    return model._replace(lower=lower, upper=upper, name=f"{model.name}_{bounds.mode}")


def execution_gate(bounds, model, min_int_fixing=0.5):
    """True if at least ``min_int_fixing`` of the integer variables are fixed"""

    return fixing_rate(bounds, model) >= min_int_fixing
