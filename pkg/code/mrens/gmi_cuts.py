"""Gomory mixed-integer cuts from the rows of an optimal simplex tableau"""

import logging

import numpy as np

from .lp_simplex import OPTIMAL, VarStatus, tableau_row

logger = logging.getLogger(__name__)

# rows whose basic variable is closer than this to an integer are not used
MIN_FRACTIONALITY = 1e-4
# minimum violation at the point the cut was derived from
SEPARATION_TOL = 1e-6
MAX_CUTS_PER_ROUND = 10

ZERO_COEFFICIENT = 1e-10
MAX_DYNAMISM = 1e8


class GmiCut:
    """cut ``coefficients @ x >= rhs`` over the structural variables

    Parameters
    ----------
    indices : array-like of int
        Variables with a nonzero coefficient (sorted).
    values : array-like of float
        Coefficients of these variables.
    rhs : float
        Right-hand side.
    num_vars : int
        Number of structural variables of the model.
    source_var : int
        Fractional basic integer variable whose tableau row produced the cut.
    violation_at_source : float
        Violation at the LP solution the cut was derived from.
    """

    def __init__(self, indices, values, rhs, num_vars, source_var, violation_at_source):

        self.indices = np.asarray(indices, dtype=int)
        self.values = np.asarray(values, dtype=float)
        self.rhs = float(rhs)
        self.num_vars = num_vars
        self.source_var = source_var
        self.violation_at_source = violation_at_source

        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have the same length")

    @property
    def coefficients(self):
        return self.dense()

    def dense(self):
        """coefficient vector of length ``num_vars``"""

        out = np.zeros(self.num_vars)
        out[self.indices] = self.values
        return out

    def __repr__(self):
        return (
            f"<GmiCut source={self.source_var} nnz={self.indices.size} "
            f"rhs={self.rhs:.6g}>"
        )


def cut_violation(cut, x):
    """rhs - coefficients @ x; positive if x violates the cut"""

    x = np.asarray(x, dtype=float)

    if x.shape != (cut.num_vars,):
        raise ValueError(f"expected a vector of length {cut.num_vars}, found {x.shape}")

    return float(cut.rhs - cut.values @ x[cut.indices])


def same_cut(a, b, tol=1e-9):
    """True if two cuts have the same support, coefficients and rhs"""

    if a.num_vars != b.num_vars or not np.array_equal(a.indices, b.indices):
        return False

    return bool(np.allclose(a.values, b.values, rtol=0, atol=tol)) and (
        abs(a.rhs - b.rhs) <= tol
    )


def _fractional_part(values):
    return values - np.floor(values)


def _gmi_weights(coefficients, is_integer, f0):
    """coefficients of the cut ``weights @ shifts >= 1`` in shift space"""

    weights = np.empty_like(coefficients)

    fj = _fractional_part(coefficients[is_integer])
    weights[is_integer] = np.where(fj <= f0, fj / f0, (1 - fj) / (1 - f0))

    a = coefficients[~is_integer]
    weights[~is_integer] = np.where(a >= 0, a / f0, -a / (1 - f0))

    return weights


def _to_structural(model, basis, columns, weights):
    """substitute the shifts of the nonbasic variables by the structural variables"""

    n = model.num_vars
    gamma = np.zeros(n)
    constant = 0.0

    for j, w in zip(columns, weights):

        if w == 0.0:
            continue

        if j < n:
            if basis.status[j] == VarStatus.AT_UPPER:
                gamma[j] -= w
                constant += w * model.upper[j]
            else:
                gamma[j] += w
                constant -= w * model.lower[j]
        else:
            # slack of row r: s = a_r @ x - b_r
            r = j - n
            row = model.A.getrow(r)
            gamma[row.indices] += w * row.data
            constant -= w * model.rhs[r]

    return gamma, 1.0 - constant


def _clean(model, gamma, rhs):
    """remove tiny coefficients (relaxing rhs) and reject badly scaled cuts"""

    tiny = (np.abs(gamma) < ZERO_COEFFICIENT) & (gamma != 0)

    for j in np.flatnonzero(tiny):
        # largest possible value of gamma_j * x_j over the bounds
        bound = model.upper[j] if gamma[j] > 0 else model.lower[j]
        if not np.isfinite(bound):
            continue
        rhs -= gamma[j] * bound
        gamma[j] = 0.0

    indices = np.flatnonzero(gamma)
    if indices.size == 0:
        return None

    magnitude = np.abs(gamma[indices])
    if magnitude.max() / magnitude.min() > MAX_DYNAMISM:
        return None

    return indices, gamma[indices], rhs


def _candidate_rows(model, sol, min_fractionality):

    candidates = list()
    n = model.num_vars

    for i, j in enumerate(sol.basis.basic_order):

        if j >= n or not model.is_integer[j]:
            continue

        f0 = sol.x[j] - np.floor(sol.x[j])
        fractionality = min(f0, 1 - f0)

        if fractionality > min_fractionality:
            candidates.append((-fractionality, j, i))

    # most fractional first, lowest variable index on ties
    return [(i, j) for _, j, i in sorted(candidates)]


def gmi_cut_from_row(model, sol, basic_row):
    """derive the GMI cut of one tableau row, None if the row gives no usable cut"""

    row = tableau_row(model, sol, basic_row)
    n = model.num_vars

    f0 = row.rhs - np.floor(row.rhs)
    if not 0 < f0 < 1:
        return None

    coefficients = np.where(np.abs(row.coefficients) < 1e-12, 0.0, row.coefficients)
    status = sol.basis.status[row.columns]

    # free nonbasic variables cannot be complemented
    if np.any((status == VarStatus.FREE) & (coefficients != 0)):
        return None

    is_integer = np.zeros(row.columns.size, dtype=bool)
    structural = row.columns < n
    is_integer[structural] = model.is_integer[row.columns[structural]]

    weights = _gmi_weights(coefficients, is_integer, f0)
    gamma, rhs = _to_structural(model, sol.basis, row.columns, weights)

    cleaned = _clean(model, gamma, rhs)
    if cleaned is None:
        return None

    indices, values, rhs = cleaned
    cut = GmiCut(indices, values, rhs, n, row.basic_var, 0.0)
    cut.violation_at_source = cut_violation(cut, sol.values)

    if cut.violation_at_source < SEPARATION_TOL:
        return None

    return cut


def generate_gmi_round(
    model,
    sol,
    max_cuts=MAX_CUTS_PER_ROUND,
    min_fractionality=MIN_FRACTIONALITY,
):
    """separate the fractional LP optimum ``sol`` with GMI cuts

    Parameters
    ----------
    model : MilpModel
        Model with integrality marks. ``sol`` must be a solution of its rows and
        bounds (the objective may differ).
    sol : LpSolution
        Optimal basic solution.
    max_cuts : int, default: MAX_CUTS_PER_ROUND
        Maximum number of cuts returned; rows are tried from the most fractional
        basic variable on.
    min_fractionality : float, default: MIN_FRACTIONALITY
        Minimum distance of the basic value to the nearest integer.

    Returns
    -------
    cuts : list of GmiCut
        Cuts violated by at least ``SEPARATION_TOL`` at ``sol``. Empty if no row
        qualifies.
    """

    if sol.status != OPTIMAL:
        raise ValueError(f"cuts need an optimal LP solution, found '{sol.status}'")

    cuts = list()

    for basic_row, var in _candidate_rows(model, sol, min_fractionality):

        if len(cuts) >= max_cuts:
            break

        cut = gmi_cut_from_row(model, sol, basic_row)

        if cut is None:
            logger.debug("no cut from the row of variable %d", var)
            continue

        cuts.append(cut)

    logger.debug("separated %d GMI cuts", len(cuts))

    return cuts
