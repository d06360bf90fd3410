import logging

import numpy as np
import scipy.sparse

logger = logging.getLogger(__name__)

# feasibility of rows and bounds
FEAS_TOL = 1e-6
# distance to the nearest integer still counted as integral
INT_TOL = 1e-6
# consistency of a stored objective value with c @ x
OBJ_TOL = 1e-9

FRACTIONAL = "fractional"
INTEGRAL = "integral"


def _as_vector(values, length, name, fill=None):

    if values is None:
        return np.full(length, fill, dtype=float)

    out = np.array(values, dtype=float).reshape(-1)

    if out.size != length:
        raise ValueError(f"'{name}' must have length {length}, found {out.size}")

    return out


def _freeze(arr):
    arr.flags.writeable = False
    return arr


class MilpModel:
    """min c'x  s.t.  Ax >= b,  l <= x <= u,  x_j integer for j in the integer set

    All rows are stored in ``>=`` orientation. Infinite bounds are ``np.inf`` /
    ``-np.inf``, never large finite numbers. The model is not modified after
    construction; the methods returning variations create new models.

    Parameters
    ----------
    objective : array-like of float
        Objective vector c of length n.
    A : array-like or scipy.sparse matrix
        Constraint matrix (m x n) of the ``>=`` rows.
    rhs : array-like of float
        Right-hand side b of length m.
    lower, upper : array-like of float, optional
        Variable bounds. Default: [0, inf).
    integers : iterable of int, optional
        Indices of the integer variables.
    var_names, row_names : list of str, optional
        Identifiers; generated as ``x{j}`` and ``r{i}`` if not given.
    name : str, default: "milp"
        Name of the model.
    """

    def __init__(
        self,
        objective,
        A,
        rhs,
        lower=None,
        upper=None,
        integers=(),
        var_names=None,
        row_names=None,
        name="milp",
    ):

        objective = np.array(objective, dtype=float).reshape(-1)
        n = objective.size

        if scipy.sparse.issparse(A):
            A = scipy.sparse.csr_matrix(A, dtype=float)
        else:
            A = np.array(A, dtype=float)
            if A.size == 0:
                A = np.zeros((A.shape[0] if A.ndim == 2 else 0, n))
            A = scipy.sparse.csr_matrix(A)

        if A.shape[1] != n:
            raise ValueError(f"A has {A.shape[1]} columns, expected {n}")

        m = A.shape[0]

        # no duplicate column indices and no explicit zeros in a row
        A.sum_duplicates()
        A.eliminate_zeros()
        A.sort_indices()

        rhs = _as_vector(rhs, m, "rhs")
        lower = _as_vector(lower, n, "lower", fill=0.0)
        upper = _as_vector(upper, n, "upper", fill=np.inf)

        integer_indices = np.unique(np.asarray(list(integers), dtype=int))
        if integer_indices.size and (
            integer_indices[0] < 0 or integer_indices[-1] >= n
        ):
            raise ValueError("integer index out of range")

        if np.isnan(objective).any() or np.isnan(rhs).any():
            raise ValueError("objective and rhs must not contain NaN")
        if np.isnan(lower).any() or np.isnan(upper).any():
            raise ValueError("bounds must not contain NaN")
        if np.isinf(objective).any() or np.isinf(rhs).any():
            raise ValueError("objective and rhs must be finite")
        if not np.isfinite(A.data).all():
            raise ValueError("A must be finite")

        # integer bounds are rounded inwards
        idx = integer_indices
        lower[idx] = np.ceil(lower[idx] - INT_TOL)
        upper[idx] = np.floor(upper[idx] + INT_TOL)

        bad = np.flatnonzero(lower > upper)
        if bad.size:
            j = bad[0]
            msg = f"lower bound exceeds upper bound for variable {j}: [{lower[j]}, {upper[j]}]"
            raise ValueError(msg)

        if var_names is None:
            var_names = [f"x{j}" for j in range(n)]
        if row_names is None:
            row_names = [f"r{i}" for i in range(m)]

        if len(var_names) != n:
            raise ValueError(f"expected {n} variable names, found {len(var_names)}")
        if len(row_names) != m:
            raise ValueError(f"expected {m} row names, found {len(row_names)}")

        is_integer = np.zeros(n, dtype=bool)
        is_integer[integer_indices] = True

        self.objective = _freeze(objective)
        self.A = A
        self.rhs = _freeze(rhs)
        self.lower = _freeze(lower)
        self.upper = _freeze(upper)
        self.integer_indices = _freeze(integer_indices)
        self.is_integer = _freeze(is_integer)
        self.var_names = tuple(var_names)
        self.row_names = tuple(row_names)
        self.name = name

    @classmethod
    def from_rows(
        cls,
        objective,
        rows,
        senses,
        rhs,
        lower=None,
        upper=None,
        integers=(),
        var_names=None,
        row_names=None,
        name="milp",
    ):
        """build a model from rows of sense 'G' (>=), 'L' (<=) or 'E' (==)

        'L' rows are negated, 'E' rows become the two rows ``<name>_lo`` and
        ``<name>_up``.
        """

        objective = np.array(objective, dtype=float).reshape(-1)
        n = objective.size

        if scipy.sparse.issparse(rows):
            rows = scipy.sparse.csr_matrix(rows, dtype=float)
        else:
            rows = scipy.sparse.csr_matrix(np.array(rows, dtype=float).reshape(-1, n))

        senses = [s.upper() for s in senses]
        rhs = np.array(rhs, dtype=float).reshape(-1)

        if not (rows.shape[0] == len(senses) == rhs.size):
            raise ValueError("rows, senses and rhs must have the same length")

        if row_names is None:
            row_names = [f"r{i}" for i in range(len(senses))]

        blocks, b, names = list(), list(), list()
        for i, sense in enumerate(senses):
            row = rows.getrow(i)
            if sense == "G":
                blocks.append(row)
                b.append(rhs[i])
                names.append(row_names[i])
            elif sense == "L":
                blocks.append(-row)
                b.append(-rhs[i])
                names.append(row_names[i])
            elif sense == "E":
                blocks += [row, -row]
                b += [rhs[i], -rhs[i]]
                names += [row_names[i] + "_lo", row_names[i] + "_up"]
            else:
                raise ValueError(f"unknown row sense '{sense}'")

        if blocks:
            A = scipy.sparse.vstack(blocks, format="csr")
        else:
            A = scipy.sparse.csr_matrix((0, n))

        return cls(
            objective,
            A,
            b,
            lower=lower,
            upper=upper,
            integers=integers,
            var_names=var_names,
            row_names=names,
            name=name,
        )

    @property
    def num_vars(self):
        return self.objective.size

    @property
    def num_rows(self):
        return self.A.shape[0]

    @property
    def integer_set(self):
        return frozenset(self.integer_indices.tolist())

    def _replace(self, **kwargs):

        fields = dict(
            objective=self.objective,
            A=self.A,
            rhs=self.rhs,
            lower=self.lower,
            upper=self.upper,
            integers=self.integer_indices,
            var_names=self.var_names,
            row_names=self.row_names,
            name=self.name,
        )
        fields.update(kwargs)

        return type(self)(**fields)

    def with_bounds(self, lower, upper):
        """copy of the model with new variable bounds"""
        return self._replace(lower=lower, upper=upper)

    def with_objective(self, objective):
        """copy of the model with a new objective vector"""
        return self._replace(objective=objective)

    def permute(self, order):
        """reorder the variables: new variable k is old variable ``order[k]``"""

        order = np.asarray(order, dtype=int)

        if sorted(order.tolist()) != list(range(self.num_vars)):
            raise ValueError("'order' must be a permutation of the variable indices")

        inverse = np.empty_like(order)
        inverse[order] = np.arange(order.size)

        return self._replace(
            objective=self.objective[order],
            A=self.A[:, order],
            lower=self.lower[order],
            upper=self.upper[order],
            integers=inverse[self.integer_indices],
            var_names=[self.var_names[j] for j in order],
        )

    def row_activity(self, x):
        """Ax for a vector of length n"""

        x = np.asarray(x, dtype=float)
        if x.shape != (self.num_vars,):
            raise ValueError(f"expected a vector of length {self.num_vars}, found {x.shape}")

        return self.A @ x

    def __repr__(self):

        n_int = self.integer_indices.size
        return (
            f"<MilpModel '{self.name}'>\n"
            f"variables: {self.num_vars} ({n_int} integer)\n"
            f"rows: {self.num_rows} (nonzeros: {self.A.nnz})"
        )


class Solution:
    """a point of a model together with its objective value"""

    def __init__(self, values, objective_value, kind):

        if kind not in (FRACTIONAL, INTEGRAL):
            raise ValueError(f"kind must be '{FRACTIONAL}' or '{INTEGRAL}', found {kind}")

        values = np.array(values, dtype=float)
        self.values = _freeze(values)
        self.objective_value = float(objective_value)
        self.kind = kind

    @classmethod
    def from_values(cls, model, values, tol=INT_TOL):

        values = np.array(values, dtype=float)
        if values.shape != (model.num_vars,):
            raise ValueError(
                f"expected a vector of length {model.num_vars}, found {values.shape}"
            )

        kind = INTEGRAL if is_integral(values, model.integer_indices, tol) else FRACTIONAL
        return cls(values, float(model.objective @ values), kind)

    def __repr__(self):
        return f"<Solution {self.kind} objective={self.objective_value:.6g}>"


def lp_relaxation(model):
    """drop the integrality requirements"""

    if model.integer_indices.size == 0:
        return model

    return model._replace(integers=())


def is_integral(x, integer_set, tol=INT_TOL):
    """True if all entries of x listed in ``integer_set`` are within tol of an integer"""

    x = np.asarray(x, dtype=float)

    if isinstance(integer_set, (set, frozenset)):
        integer_set = sorted(integer_set)
    idx = np.asarray(integer_set, dtype=int)

    if idx.size == 0:
        return True

    values = x[idx]
    return bool(np.all(np.abs(values - np.round(values)) <= tol))


def check_feasible(model, x, tol=FEAS_TOL):
    """check rows, bounds and integrality of x

    Parameters
    ----------
    model : MilpModel
        Model to check against.
    x : array-like of float
        Point of length ``model.num_vars``.
    tol : float, default: FEAS_TOL
        Absolute tolerance for rows and bounds. Integrality uses ``INT_TOL``.

    Returns
    -------
    feasible : bool
    """

    x = np.asarray(x, dtype=float)

    if x.shape != (model.num_vars,):
        raise ValueError(f"expected a vector of length {model.num_vars}, found {x.shape}")

    if not np.isfinite(x).all():
        return False

    if np.any(x < model.lower - tol) or np.any(x > model.upper + tol):
        return False

    if model.num_rows and np.any(model.A @ x < model.rhs - tol):
        return False

    return is_integral(x, model.integer_indices, INT_TOL)
