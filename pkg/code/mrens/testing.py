"""random instances and enumeration oracles for the tests

The oracles do not use the simplex code of this package: vertices are enumerated
with numpy and continuous parts are solved with ``scipy.optimize.linprog``.
"""

import itertools

import numpy as np
import scipy.optimize

from .model import FEAS_TOL, MilpModel, check_feasible


def random_lp(rng, n, m, width=4):
    """feasible LP with box bounds and random dense rows"""

    lower = rng.integers(-3, 1, size=n).astype(float)
    upper = lower + rng.integers(1, width + 1, size=n)

    x_feas = rng.uniform(lower, upper)
    A = rng.integers(-4, 5, size=(m, n)).astype(float)
    rhs = A @ x_feas - rng.uniform(0, 2, size=m)

    objective = np.round(rng.normal(size=n), 2)

    return MilpModel(objective, A, rhs, lower=lower, upper=upper, name="random_lp")


def random_milp(rng, n_int, m, box=3, n_cont=0):
    """feasible MILP over integer boxes ``[0, box]`` and continuous vars in [0, 2]

    A random integer point (with random continuous part) satisfies all rows.
    """

    n = n_int + n_cont

    lower = np.zeros(n)
    upper = np.concatenate([np.full(n_int, box), np.full(n_cont, 2.0)])

    x_feas = np.concatenate(
        [rng.integers(0, box + 1, size=n_int), rng.uniform(0, 2, size=n_cont)]
    )

    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    rhs = np.floor(A @ x_feas) - rng.integers(0, 3, size=m)

    objective = rng.integers(-5, 6, size=n).astype(float)

    return MilpModel(
        objective,
        A,
        rhs,
        lower=lower,
        upper=upper,
        integers=range(n_int),
        name="random_milp",
    )


def knapsack_model():
    """min -(5 x1 + 4 x2 + 3 x3)  s.t.  2 x1 + 3 x2 + x3 <= 5, x binary"""

    return MilpModel.from_rows(
        [-5, -4, -3],
        [[2, 3, 1]],
        ["L"],
        [5],
        lower=[0, 0, 0],
        upper=[1, 1, 1],
        integers=[0, 1, 2],
        name="knapsack",
    )


def _halfspaces(model):
    """rows and finite bounds as (a, b) with a @ x >= b"""

    n = model.num_vars
    A = model.A.toarray()

    halfspaces = [(A[i], model.rhs[i]) for i in range(model.num_rows)]

    eye = np.eye(n)
    for j in range(n):
        if np.isfinite(model.lower[j]):
            halfspaces.append((eye[j], model.lower[j]))
        if np.isfinite(model.upper[j]):
            halfspaces.append((-eye[j], -model.upper[j]))

    return halfspaces


def vertex_optimum(model, objective=None):
    """minimum over all vertices of the LP relaxation of a bounded model

    Returns
    -------
    value : float
        ``np.inf`` if the polytope is empty.
    x : ndarray or None
    """

    n = model.num_vars
    c = model.objective if objective is None else np.asarray(objective, dtype=float)

    halfspaces = _halfspaces(model)
    G = np.array([a for a, _ in halfspaces])
    h = np.array([b for _, b in halfspaces])

    best, best_x = np.inf, None

    for active in itertools.combinations(range(len(halfspaces)), n):

        M = G[list(active)]
        if abs(np.linalg.det(M)) < 1e-9:
            continue

        x = np.linalg.solve(M, h[list(active)])

        if np.all(G @ x >= h - 1e-9):
            value = c @ x
            if value < best:
                best, best_x = value, x

    return best, best_x


def linprog_optimum(model, lower=None, upper=None):
    """optimal value of the LP relaxation with scipy's HiGHS (inf if infeasible)"""

    lower = model.lower if lower is None else lower
    upper = model.upper if upper is None else upper

    bounds = [
        (lo if np.isfinite(lo) else None, up if np.isfinite(up) else None)
        for lo, up in zip(lower, upper)
    ]

    kwargs = dict()
    if model.num_rows:
        kwargs = dict(A_ub=-model.A.toarray(), b_ub=-model.rhs)

    res = scipy.optimize.linprog(model.objective, bounds=bounds, method="highs", **kwargs)

    if res.status == 2:
        return np.inf, None
    if res.status != 0:
        raise RuntimeError(f"linprog failed: {res.message}")

    return res.fun, res.x


def integer_points(model):
    """all assignments of the integer variables inside their (finite) bounds"""

    idx = model.integer_indices
    lower, upper = model.lower[idx], model.upper[idx]

    if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
        raise ValueError("enumeration needs finite bounds on all integer variables")

    ranges = [range(int(lo), int(up) + 1) for lo, up in zip(lower, upper)]

    for values in itertools.product(*ranges):
        yield np.array(values, dtype=float)


def feasible_points(model):
    """all feasible points of a pure integer model"""

    if model.integer_indices.size != model.num_vars:
        raise ValueError("model has continuous variables")

    return [x for x in integer_points(model) if check_feasible(model, x, FEAS_TOL)]


def brute_force_optimum(model):
    """optimal value and solution of a small MILP by enumeration

    Continuous variables are optimised by ``linprog`` for every integer assignment.
    """

    idx = model.integer_indices
    continuous = model.integer_indices.size != model.num_vars

    best, best_x = np.inf, None

    for values in integer_points(model):

        if continuous:
            lower = np.array(model.lower)
            upper = np.array(model.upper)
            lower[idx] = upper[idx] = values
            value, x = linprog_optimum(model, lower, upper)
        else:
            x = values
            value = model.objective @ x if check_feasible(model, x) else np.inf

        if value < best:
            best, best_x = value, x

    return best, best_x
