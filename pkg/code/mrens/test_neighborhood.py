import hypothesis.strategies as st
import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings

from . import (
    HeuristicGates,
    MilpModel,
    NeighborhoodBounds,
    build_submilp,
    execution_gate,
    fixing_rate,
    mrens_bounds,
    rens_bounds,
)
from .neighborhood import MRENS, RENS
from .testing import feasible_points


def free_model(n, bound=10):
    """n integer variables in [-bound, bound] without rows"""

    return MilpModel(
        np.zeros(n),
        np.zeros((0, n)),
        [],
        lower=[-bound] * n,
        upper=[bound] * n,
        integers=range(n),
    )


@pytest.fixture
def strip():
    """0 <= 3 x - 2 y <= 0.5 with x, y integer in [0, 4]"""

    return MilpModel.from_rows(
        [0, -1], [[3, -2], [3, -2]], ["G", "L"], [0, 0.5], upper=[4, 4], integers=[0, 1]
    )


# =============================================================================
# RENS
# =============================================================================


def test_rens_bounds():

    model = free_model(3)
    bounds = rens_bounds(model, [1.5, -2.0, 0.25])

    assert bounds.mode == RENS
    npt.assert_equal(bounds.var_lower, [1, -2, 0])
    npt.assert_equal(bounds.var_upper, [2, -2, 1])
    assert bounds.fixed_count == 1


def test_rens_snaps_near_integral_values():

    bounds = rens_bounds(free_model(2), [2.0000001, 2.9999999])

    npt.assert_equal(bounds.var_lower, [2, 3])
    npt.assert_equal(bounds.var_upper, [2, 3])


def test_rens_intersects_model_bounds():

    model = MilpModel([0, 0], np.zeros((0, 2)), [], upper=[3, 3], integers=[0, 1])
    bounds = rens_bounds(model, [3.0, 0.0])

    npt.assert_equal(bounds.var_lower, [3, 0])
    npt.assert_equal(bounds.var_upper, [3, 0])


def test_rens_skips_continuous_variables():

    model = MilpModel([0, 0, 0], np.zeros((0, 3)), [], upper=[3, 3, 3], integers=[0, 2])
    bounds = rens_bounds(model, [0.5, 0.5, 2.0])

    npt.assert_equal(bounds.integer_indices, [0, 2])
    npt.assert_equal(bounds.var_lower, [0, 2])
    npt.assert_equal(bounds.var_upper, [1, 2])


# =============================================================================
# MRENS
# =============================================================================


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1.2, 2.2], (2, 2)),
        ([2.3, 2.7], (2, 3)),
        ([2.0], (2, 2)),
        ([2.5], (2, 3)),
        ([1.0, 2.0], (1, 2)),
        ([1.0, 1.5], (1, 2)),
        ([0.5, 3.5], (1, 3)),
        ([0.5, 1.4], (0, 2)),
        ([1.3, 2.2], (1, 3)),
        ([-1.5, 0.5], (-1, 0)),
        ([-0.3, 0.3], (-1, 1)),
        ([3.0, 3.0], (3, 3)),
        ([1.2, 2.2, 1.7], (2, 2)),
        ([0.1, 0.2, 0.9], (0, 1)),
        ([0.0, 5.0], (0, 5)),
        ([4.9999999, 5.2], (5, 6)),
        ([2.9, 4.1, 3.5], (3, 4)),
        ([-2.5, -1.5], (-2, -2)),
        ([9.5], (9, 10)),
        ([9.7, 10.0], (9, 10)),
        ([-10.0, -9.2], (-10, -9)),
        ([0.5, 1.5, 2.5], (1, 2)),
        ([1.0, 1.9999999], (1, 2)),
    ],
)
def test_mrens_interval(values, expected):

    model = free_model(1)
    bounds = mrens_bounds(model, [[v] for v in values])

    assert bounds.mode == MRENS
    assert (bounds.var_lower[0], bounds.var_upper[0]) == expected


def test_mrens_per_variable():

    model = free_model(2)
    bounds = mrens_bounds(model, [[1.2, 2.3], [2.2, 2.7]])

    npt.assert_equal(bounds.var_lower, [2, 2])
    npt.assert_equal(bounds.var_upper, [2, 3])


def test_single_reference_equals_rens_random():

    rng = np.random.default_rng(0)
    model = free_model(5)

    for _ in range(10_000):

        x = rng.uniform(-10, 10, size=5)
        # some exactly integral entries
        x = np.where(rng.random(5) < 0.3, np.round(x), x)

        rens = rens_bounds(model, x)
        mrens = mrens_bounds(model, [x])

        npt.assert_equal(mrens.var_lower, rens.var_lower)
        npt.assert_equal(mrens.var_upper, rens.var_upper)


references = st.lists(
    st.lists(
        st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False),
        min_size=3,
        max_size=3,
    ),
    min_size=1,
    max_size=3,
)


@settings(max_examples=300, deadline=None)
@given(references)
def test_mrens_interval_properties(refs):

    model = free_model(3)
    bounds = mrens_bounds(model, refs)

    values = np.array(refs)
    vmin = values.min(axis=0)
    vmax = values.max(axis=0)

    lower, upper = bounds.var_lower, bounds.var_upper

    assert np.all(lower <= upper)
    npt.assert_equal(lower, np.round(lower))
    npt.assert_equal(upper, np.round(upper))

    # every integer strictly between the references is kept
    assert np.all(lower <= np.ceil(vmin - 1e-6))
    assert np.all(upper >= np.floor(vmax + 1e-6))

    # and nothing beyond their rounding
    assert np.all(lower >= np.floor(vmin - 1e-6))
    assert np.all(upper <= np.ceil(vmax + 1e-6))


@settings(max_examples=200, deadline=None)
@given(references.map(lambda refs: refs[:1]))
def test_mrens_single_reference_property(refs):

    model = free_model(3)

    rens = rens_bounds(model, refs[0])
    mrens = mrens_bounds(model, refs)

    npt.assert_equal(mrens.var_lower, rens.var_lower)
    npt.assert_equal(mrens.var_upper, rens.var_upper)


def test_mrens_finds_point_outside_rens(strip):

    # the LP point (1, 1.25) has no feasible integer point in its rounding box
    rens = build_submilp(strip, rens_bounds(strip, [1.0, 1.25]))
    assert feasible_points(rens) == []

    bounds = mrens_bounds(strip, [[0.5, 0.75], [2.5, 3.75]])
    npt.assert_equal(bounds.var_lower, [1, 1])
    npt.assert_equal(bounds.var_upper, [2, 3])

    points = feasible_points(build_submilp(strip, bounds))
    assert len(points) == 1
    npt.assert_equal(points[0], [2, 3])


@pytest.mark.parametrize("n_refs", [0, 4])
def test_mrens_number_of_references(n_refs):

    model = free_model(2)

    with pytest.raises(ValueError, match="reference"):
        mrens_bounds(model, [np.zeros(2)] * n_refs)


@pytest.mark.parametrize(
    "x, match",
    [
        ([0.0], "length"),
        ([0.0, np.nan], "non-finite"),
        ([0.0, 11.0], "feasible"),
    ],
)
def test_invalid_reference(x, match):

    model = free_model(2)

    with pytest.raises(ValueError, match=match):
        rens_bounds(model, x)

    with pytest.raises(ValueError, match=match):
        mrens_bounds(model, [np.zeros(2), x])


def test_reference_violating_rows(strip):

    with pytest.raises(ValueError, match="feasible"):
        rens_bounds(strip, [1.0, 0.0])


# =============================================================================
# bounds, gates and sub-MILP
# =============================================================================


def test_neighborhood_bounds_validation():

    with pytest.raises(ValueError, match="mode"):
        NeighborhoodBounds([0], [1], [0], "other")

    with pytest.raises(ValueError, match="empty"):
        NeighborhoodBounds([2], [1], [0], RENS)


def test_heuristic_gates_validation():

    assert HeuristicGates().min_int_fixing == 0.5

    with pytest.raises(ValueError):
        HeuristicGates(min_int_fixing=1.5)


def test_fixing_rate_and_gate():

    model = free_model(4)
    bounds = rens_bounds(model, [1.0, 2.0, 0.5, 0.5])

    assert fixing_rate(bounds, model) == 0.5
    assert execution_gate(bounds, model, 0.5)
    assert not execution_gate(bounds, model, 0.6)


def test_fixing_rate_without_integers():

    model = MilpModel([0, 0], np.zeros((0, 2)), [], upper=[1, 1])
    bounds = rens_bounds(model, [0.5, 0.5])

    assert bounds.integer_indices.size == 0
    assert fixing_rate(bounds, model) == 1.0
    assert execution_gate(bounds, model, 1.0)


def test_fixing_rate_wrong_model():

    bounds = rens_bounds(free_model(2), [0.0, 0.0])

    with pytest.raises(ValueError, match="model"):
        fixing_rate(bounds, free_model(3))


def test_build_submilp():

    model = MilpModel([1, 1, 1], [[1, 1, 1]], [1], upper=[5, 5, 5], integers=[0, 1], name="m")
    bounds = rens_bounds(model, [0.5, 2.0, 0.3])

    sub = build_submilp(model, bounds)

    npt.assert_equal(sub.lower, [0, 2, 0])
    npt.assert_equal(sub.upper, [1, 2, 5])
    npt.assert_equal(sub.A.toarray(), model.A.toarray())
    npt.assert_equal(sub.objective, model.objective)
    assert sub.integer_set == model.integer_set
    assert sub.name == "m_rens"

    # the original is unchanged
    npt.assert_equal(model.upper, [5, 5, 5])


def test_build_submilp_wrong_model():

    bounds = rens_bounds(free_model(2), [0.0, 0.0])

    with pytest.raises(ValueError, match="model"):
        build_submilp(free_model(3), bounds)
