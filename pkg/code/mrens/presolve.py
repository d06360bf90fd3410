"""bound propagation and removal of fixed variables

Only reductions that keep every feasible point are applied, so optimal values of
the original and the reduced model agree up to the objective offset of the fixed
variables.
"""

import logging

import numpy as np

from .model import FEAS_TOL, INT_TOL, MilpModel

logger = logging.getLogger(__name__)

MAX_PASSES = 10
# continuous bounds are only tightened by more than this
MIN_TIGHTENING = 1e-6


class PresolveMapping:
    """correspondence between the variables of the original and the reduced model

    Attributes
    ----------
    kept : ndarray of int
        Original index of every variable of the reduced model.
    fixed_values : ndarray of float
        Values of the removed variables (NaN for kept variables).
    offset : float
        Objective contribution of the removed variables.
    infeasible : bool
        True if propagation proved the model infeasible.
    passes : int
    """

    def __init__(self, num_vars, kept, fixed_values, offset=0.0, infeasible=False, passes=0):

        self.num_vars = num_vars
        self.kept = np.asarray(kept, dtype=int)
        self.fixed_values = np.asarray(fixed_values, dtype=float)
        self.offset = offset
        self.infeasible = infeasible
        self.passes = passes

    def lift(self, values):
        """extend a solution of the reduced model to the original variables"""

        values = np.asarray(values, dtype=float)

        if values.shape != self.kept.shape:
            raise ValueError(
                f"expected {self.kept.size} reduced values, found {values.shape}"
            )

        x = self.fixed_values.copy()
        x[self.kept] = values
        return x

    def __repr__(self):
        status = "infeasible" if self.infeasible else f"{self.kept.size} kept"
        return f"<PresolveMapping {self.num_vars} variables: {status}>"


def _activity_bounds(coefs, lower, upper):
    """contributions of every entry to the minimum and maximum row activity"""

    pos = coefs > 0
    with np.errstate(invalid="ignore"):
        max_contrib = np.where(pos, coefs * upper, coefs * lower)
        min_contrib = np.where(pos, coefs * lower, coefs * upper)

    return min_contrib, max_contrib


def _residual(contrib):
    """sum of all other entries for each entry (inf if any other entry is inf)"""

    finite = np.isfinite(contrib)
    n_inf = np.sum(~finite)
    total = np.sum(contrib[finite])

    if n_inf == 0:
        return total - contrib

    residual = np.full(contrib.size, np.inf)
    if n_inf == 1:
        residual[~finite] = total
    return residual


def _tighten(lower, upper, is_integer, j, new_lower=None, new_upper=None):
    """apply a tighter bound, return True if it changed"""

    changed = False

    if new_lower is not None:
        if is_integer[j]:
            new_lower = np.ceil(new_lower - INT_TOL)
        if new_lower > lower[j] + (0 if is_integer[j] else MIN_TIGHTENING):
            lower[j] = new_lower
            changed = True

    if new_upper is not None:
        if is_integer[j]:
            new_upper = np.floor(new_upper + INT_TOL)
        if new_upper < upper[j] - (0 if is_integer[j] else MIN_TIGHTENING):
            upper[j] = new_upper
            changed = True

    return changed


def _propagate_row(coefs, cols, rhs, lower, upper, is_integer):
    """tighten the bounds of the variables of one row, None if the row is infeasible"""

    lo, up = lower[cols], upper[cols]
    _, max_contrib = _activity_bounds(coefs, lo, up)

    if np.isfinite(max_contrib).all() and max_contrib.sum() < rhs - FEAS_TOL:
        return None

    residual = _residual(max_contrib)
    changed = False

    for k, j in enumerate(cols):

        if not np.isfinite(residual[k]):
            continue

        # coefs[k] * x_j >= rhs - residual
        bound = (rhs - residual[k]) / coefs[k]

        if coefs[k] > 0:
            changed |= _tighten(lower, upper, is_integer, j, new_lower=bound)
        else:
            changed |= _tighten(lower, upper, is_integer, j, new_upper=bound)

    return changed


def _resolve_crossing(lower, upper):
    """clamp bounds crossing by at most FEAS_TOL, False if a bound pair is infeasible"""

    crossing = lower > upper
    if not crossing.any():
        return True

    if np.any(lower[crossing] > upper[crossing] + FEAS_TOL):
        return False

    lower[crossing] = upper[crossing]
    return True


def _infeasible(model, passes):

    logger.debug("presolve: '%s' is infeasible", model.name)
    nan = np.full(model.num_vars, np.nan)
    return None, 0.0, PresolveMapping(model.num_vars, [], nan, infeasible=True, passes=passes)


def presolve(model, max_passes=MAX_PASSES):
    """tighten bounds by row activities and remove fixed variables

    Parameters
    ----------
    model : MilpModel
    max_passes : int, default: MAX_PASSES
        Maximum number of propagation passes over all rows.

    Returns
    -------
    reduced : MilpModel or None
        Model over the variables that are not fixed; None if infeasible.
    fixed_fraction_total : float
        Share of all variables (integer and continuous) that are fixed, including
        variables fixed in ``model`` already. 1.0 for a model without variables.
    mapping : PresolveMapping
        Lifts solutions of ``reduced`` back; ``mapping.infeasible`` flags a proven
        infeasible model.
    """

    n = model.num_vars
    lower = np.array(model.lower)
    upper = np.array(model.upper)
    is_integer = model.is_integer

    A = model.A
    passes = 0

    for passes in range(1, max_passes + 1):

        changed = False

        for i in range(model.num_rows):

            start, end = A.indptr[i], A.indptr[i + 1]
            cols = A.indices[start:end]

            if cols.size == 0:
                continue

            result = _propagate_row(
                A.data[start:end], cols, model.rhs[i], lower, upper, is_integer
            )
            if result is None:
                return _infeasible(model, passes)
            changed |= result

        if not _resolve_crossing(lower, upper):
            return _infeasible(model, passes)

        if not changed:
            break

    fixed = lower == upper
    kept = np.flatnonzero(~fixed)

    fixed_values = np.where(fixed, lower, np.nan)
    x_fixed = np.where(fixed, lower, 0.0)

    rhs = model.rhs - A @ x_fixed
    offset = float(model.objective @ x_fixed)

    reduced_A = A[:, kept].tocsr()
    lo, up = lower[kept], upper[kept]

    # rows without free entries or satisfied at the least favourable bounds
    keep_rows = list()
    for i in range(model.num_rows):

        row = reduced_A.getrow(i)
        min_contrib, _ = _activity_bounds(row.data, lo[row.indices], up[row.indices])
        min_activity = min_contrib.sum() if row.nnz else 0.0

        if row.nnz == 0:
            if rhs[i] > FEAS_TOL:
                return _infeasible(model, passes)
            continue

        if min_activity >= rhs[i]:
            continue

        keep_rows.append(i)

    integers = np.flatnonzero(is_integer[kept])

    reduced = MilpModel(
        model.objective[kept],
        reduced_A[keep_rows],
        rhs[keep_rows],
        lower=lo,
        upper=up,
        integers=integers,
        var_names=[model.var_names[j] for j in kept],
        row_names=[model.row_names[i] for i in keep_rows],
        name=f"{model.name}_presolved",
    )

    fixed_fraction_total = fixed.sum() / n if n else 1.0

    logger.debug(
        "presolve: %d of %d variables fixed, %d of %d rows kept after %d passes",
        fixed.sum(),
        n,
        len(keep_rows),
        model.num_rows,
        passes,
    )

    mapping = PresolveMapping(n, kept, fixed_values, offset=offset, passes=passes)

    return reduced, float(fixed_fraction_total), mapping
