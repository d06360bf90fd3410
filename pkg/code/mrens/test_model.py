import numpy as np
import numpy.testing as npt
import pytest

from . import MilpModel, Solution, check_feasible, is_integral, lp_relaxation
from .model import FRACTIONAL, INTEGRAL
from .testing import random_milp


@pytest.fixture
def cover():
    """x1 + x2 >= 1, x binary"""
    return MilpModel([1, 1], [[1, 1]], [1], lower=[0, 0], upper=[1, 1], integers=[0, 1])


def test_default_bounds():

    model = MilpModel([1, 2], [[1, 0]], [0])

    npt.assert_equal(model.lower, [0, 0])
    npt.assert_equal(model.upper, [np.inf, np.inf])
    assert model.integer_set == frozenset()


def test_integer_bounds_rounded_inwards():

    model = MilpModel([0, 0], np.zeros((0, 2)), [], lower=[0.2, 0.2], upper=[3.7, 3.7], integers=[0])

    npt.assert_equal(model.lower, [1, 0.2])
    npt.assert_equal(model.upper, [3, 3.7])


def test_integer_bounds_snap_within_tolerance():

    model = MilpModel([0], np.zeros((0, 1)), [], lower=[0.9999999], upper=[2.0000001], integers=[0])

    npt.assert_equal(model.lower, [1])
    npt.assert_equal(model.upper, [2])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lower=[2], upper=[1]),
        dict(lower=[0.2], upper=[0.8], integers=[0]),
        dict(lower=[np.nan]),
    ],
)
def test_invalid_bounds(kwargs):

    with pytest.raises(ValueError):
        MilpModel([1], [[1]], [0], **kwargs)


def test_invalid_dimensions():

    with pytest.raises(ValueError, match="columns"):
        MilpModel([1, 1], [[1, 1, 1]], [0])

    with pytest.raises(ValueError, match="rhs"):
        MilpModel([1, 1], [[1, 1]], [0, 1])

    with pytest.raises(ValueError, match="integer index"):
        MilpModel([1, 1], [[1, 1]], [0], integers=[2])


def test_sparse_rows_are_clean():

    model = MilpModel([1, 1, 1], [[1, 0, 2], [0, 0, 3]], [0, 0])

    assert model.A.nnz == 3
    assert np.all(model.A.data != 0)
    assert model.A.has_sorted_indices


def test_model_is_read_only(cover):

    with pytest.raises(ValueError):
        cover.objective[0] = 5


def test_from_rows():

    model = MilpModel.from_rows(
        [1, 1], [[1, 2], [3, 4], [1, 1]], ["G", "L", "E"], [1, 2, 3], row_names=["a", "b", "c"]
    )

    npt.assert_equal(model.A.toarray(), [[1, 2], [-3, -4], [1, 1], [-1, -1]])
    npt.assert_equal(model.rhs, [1, -2, 3, -3])
    assert model.row_names == ("a", "b", "c_lo", "c_up")


def test_from_rows_unknown_sense():

    with pytest.raises(ValueError, match="sense"):
        MilpModel.from_rows([1], [[1]], ["X"], [1])


def test_lp_relaxation():

    model = MilpModel([1, 2, 3], [[1, 1, 1]], [1], upper=[1, 1, 1], integers=[2])
    relaxed = lp_relaxation(model)

    assert relaxed.integer_set == frozenset()
    npt.assert_equal(relaxed.objective, model.objective)
    npt.assert_equal(relaxed.A.toarray(), model.A.toarray())
    npt.assert_equal(relaxed.rhs, model.rhs)
    npt.assert_equal(relaxed.lower, model.lower)
    npt.assert_equal(relaxed.upper, model.upper)
    assert relaxed.var_names == model.var_names


def test_lp_relaxation_idempotent(cover):

    relaxed = lp_relaxation(cover)
    assert lp_relaxation(relaxed) is relaxed


@pytest.mark.parametrize(
    "x, expected", [((1, 0), True), ((0.5, 0.5), False), ((0, 0), False), ((1, 1.5), False)]
)
def test_check_feasible(cover, x, expected):

    assert check_feasible(cover, np.array(x, dtype=float)) == expected


def test_check_feasible_tolerance(cover):

    assert check_feasible(lp_relaxation(cover), [0.5, 0.4999995])
    assert not check_feasible(lp_relaxation(cover), [0.5, 0.49999])


def test_check_feasible_dimension(cover):

    with pytest.raises(ValueError, match="length"):
        check_feasible(cover, [1, 0, 0])


def test_check_feasible_nan(cover):

    assert not check_feasible(cover, [np.nan, 1])


@pytest.mark.parametrize(
    "x, integers, expected",
    [
        ((2.0, 0.3), {0}, True),
        ((2.0, 0.3), {0, 1}, False),
        ((1.9999995,), {0}, True),
        ((1.99999,), {0}, False),
        ((0.3,), set(), True),
    ],
)
def test_is_integral(x, integers, expected):

    assert is_integral(np.array(x), integers, tol=1e-6) == expected


def test_solution_from_values(cover):

    sol = Solution.from_values(cover, [1, 0])
    assert sol.kind == INTEGRAL
    assert sol.objective_value == 1

    sol = Solution.from_values(cover, [0.5, 0.5])
    assert sol.kind == FRACTIONAL
    assert abs(sol.objective_value - cover.objective @ sol.values) <= 1e-9


def test_permute():

    model = MilpModel([1, 2, 3], [[1, 0, 2]], [1], upper=[4, 5, 6], integers=[0])
    permuted = model.permute([2, 0, 1])

    npt.assert_equal(permuted.objective, [3, 1, 2])
    npt.assert_equal(permuted.A.toarray(), [[2, 1, 0]])
    npt.assert_equal(permuted.upper, [6, 4, 5])
    assert permuted.integer_set == frozenset({1})
    assert permuted.var_names == ("x2", "x0", "x1")


def test_permute_not_a_permutation():

    model = MilpModel([1, 2], [[1, 1]], [1])

    with pytest.raises(ValueError, match="permutation"):
        model.permute([0, 0])


def test_row_activity():

    model = MilpModel([1, 2], [[1, 1], [2, 0]], [1, 1])
    npt.assert_equal(model.row_activity([1, 2]), [3, 2])


@pytest.mark.parametrize("seed", range(20))
def test_relaxation_keeps_milp_feasible_points(seed):

    rng = np.random.default_rng(seed)
    model = random_milp(rng, 3, 3, n_cont=1)
    relaxed = lp_relaxation(model)

    for _ in range(50):
        x = np.concatenate([rng.integers(0, 4, size=3), rng.uniform(0, 2, size=1)])
        if check_feasible(model, x):
            assert check_feasible(relaxed, x)


def test_repr(cover):

    assert "variables: 2 (2 integer)" in repr(cover)
