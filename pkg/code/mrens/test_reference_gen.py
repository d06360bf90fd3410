import dataclasses

import numpy as np
import numpy.testing as npt
import pytest

from . import MilpModel, lp_relaxation, solve_lp
from .gmi_cuts import GmiCut
from .model import check_feasible
from .reference_gen import (
    LagrangianState,
    RefGenConfig,
    ReferenceSet,
    dual_value,
    lagrangian_constant,
    lagrangian_objective,
    run_relax_and_cut,
    select_references,
    update_multipliers,
)
from .testing import brute_force_optimum, random_milp


def cut(indices, values, rhs, n):
    return GmiCut(indices, values, rhs, n, indices[0], 1.0)


def test_lagrangian_objective_zero_multipliers():

    c = np.array([1.0, -2.0])
    pool = [cut([0], [1.0], 1.0, 2)]

    npt.assert_equal(lagrangian_objective(c, pool, [0.0]), c)


def test_lagrangian_objective_single_cut():

    pool = [cut([0], [1.0], 1.0, 2)]

    npt.assert_equal(lagrangian_objective([-1, 0], pool, [2.0]), [-3, 0])
    assert lagrangian_constant(pool, [2.0]) == 2


def test_lagrangian_objective_linear_in_multipliers():

    c = np.array([0.5, 1.0, -1.0])
    a = cut([0, 2], [1.0, 3.0], 2.0, 3)

    twice = lagrangian_objective(c, [a, a], [1.0, 1.0])
    once = lagrangian_objective(c, [a], [2.0])

    npt.assert_allclose(twice, once)


def test_lagrangian_objective_errors():

    pool = [cut([0], [1.0], 1.0, 2)]

    with pytest.raises(ValueError, match="nonnegative"):
        lagrangian_objective([1, 1], pool, [-1.0])

    with pytest.raises(ValueError, match="multipliers"):
        lagrangian_objective([1, 1], pool, [1.0, 1.0])


def test_lagrangian_objective_does_not_modify_c():

    c = np.array([1.0, 1.0])
    lagrangian_objective(c, [cut([0], [1.0], 1.0, 2)], [3.0])

    npt.assert_equal(c, [1, 1])


def state_with_cuts(pool, multipliers, objective=(0.0, 0.0), **kwargs):

    state = LagrangianState(objective=np.array(objective), **kwargs)
    state = state.with_cuts(pool)
    return dataclasses.replace(state, multipliers=np.array(multipliers, dtype=float))


def test_update_satisfied_cut_stays_zero():

    # x1 >= 1 satisfied with slack at x = (3, 0)
    state = state_with_cuts([cut([0], [1.0], 1.0, 2)], [0.0])
    new = update_multipliers(state, np.array([3.0, 0.0]))

    npt.assert_equal(new.multipliers, [0.0])


def test_update_violated_cut_increases():

    # violation 1 at x = 0; no incumbent: t = mu / (iteration + 1) = 1
    state = state_with_cuts([cut([0], [1.0], 1.0, 2)], [0.0])
    new = update_multipliers(state, np.zeros(2))

    npt.assert_allclose(new.multipliers, [1.0])
    assert new.iteration == 1


def test_update_polyak_step():

    # L = 0 at x = 0, UB = 2, g = (1,), t = 1 * 2 / 1
    state = state_with_cuts(
        [cut([0], [1.0], 1.0, 2)], [0.0], incumbent_primal_value=2.0
    )
    new = update_multipliers(state, np.zeros(2))

    npt.assert_allclose(new.multipliers, [2.0])


def test_update_zero_subgradient():

    # cut tight at x
    state = state_with_cuts([cut([0], [1.0], 1.0, 2)], [0.5])
    new = update_multipliers(state, np.array([1.0, 0.0]))

    npt.assert_equal(new.multipliers, [0.5])


def test_update_records_dual_value():

    state = state_with_cuts([cut([0], [1.0], 1.0, 2)], [2.0], objective=(1.0, 1.0))
    x = np.array([0.0, 1.0])
    new = update_multipliers(state, x)

    # (c - 2 e1) @ x + 2
    assert new.dual_values == (3.0,)
    assert new.best_dual_value == 3.0
    assert dual_value(state, x) == 3.0


def test_mu_halved_after_non_improvement():

    state = state_with_cuts([cut([0], [1.0], 1.0, 2)], [0.0], objective=(1.0, 0.0))
    x = np.array([3.0, 0.0])

    for _ in range(3):
        state = update_multipliers(state, x)

    # first update improves on -inf, two more do not
    assert state.mu == 1.0

    state = update_multipliers(state, x)
    assert state.mu == 0.5
    assert state.non_improving == 0


def test_select_references():

    solutions = [np.full(2, float(k)) for k in range(6)]
    selected = select_references(solutions)

    assert len(selected) == 3
    for x, k in zip(selected, (0, 4, 5)):
        npt.assert_equal(x, solutions[k])


def test_select_references_short():

    assert select_references([]) == []

    solutions = [np.zeros(2), np.ones(2)]
    selected = select_references(solutions)
    assert len(selected) == 2

    selected = select_references([np.zeros(2)])
    assert len(selected) == 1


def test_select_references_deduplicates():

    solutions = [np.zeros(2), np.ones(2), np.zeros(2)]
    selected = select_references(solutions)

    assert len(selected) == 2
    npt.assert_equal(selected[0], np.zeros(2))
    npt.assert_equal(selected[1], np.ones(2))


def test_config_validation():

    with pytest.raises(ValueError):
        RefGenConfig(max_iterations=-1)
    with pytest.raises(ValueError):
        RefGenConfig(mu0=0)


def small_model():
    return MilpModel.from_rows(
        [-1, -1],
        [[3, 2], [1, 3]],
        ["L", "L"],
        [6, 4],
        upper=[3, 3],
        integers=[0, 1],
    )


def test_integral_lp_optimum():

    model = MilpModel([1, 1], [[1, 0], [0, 1]], [1, 1], upper=[3, 3], integers=[0, 1])
    refs = run_relax_and_cut(model)

    assert len(refs.all_solutions) == 1
    assert len(refs.selected) == 1
    assert len(refs.integral_found) == 1
    npt.assert_allclose(refs.integral_found[0].values, [1, 1])


def test_infeasible_relaxation():

    model = MilpModel([1], [[1]], [2], upper=[1], integers=[0])
    refs = run_relax_and_cut(model)

    assert refs.status == "infeasible"
    assert refs.root is None
    assert refs.selected == []


def test_zero_iterations_is_lp_optimum():

    model = small_model()
    refs = run_relax_and_cut(model, RefGenConfig(max_iterations=0))

    sol = solve_lp(lp_relaxation(model))

    assert len(refs.all_solutions) == 1
    npt.assert_equal(refs.root, sol.values)
    assert refs.dual_values == []


def test_first_reference_is_lp_optimum():

    model = small_model()
    refs = run_relax_and_cut(model)

    npt.assert_allclose(refs.root, [10 / 7, 6 / 7])
    npt.assert_equal(refs.selected[0], refs.all_solutions[0])
    assert 1 <= len(refs.selected) <= 3


def test_consecutive_solutions_differ():

    refs = run_relax_and_cut(small_model())

    for a, b in zip(refs.all_solutions, refs.all_solutions[1:]):
        assert np.max(np.abs(a - b)) > 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_dual_bound_and_feasible_region(seed):

    rng = np.random.default_rng(seed)
    model = random_milp(rng, 3, 3, box=3)
    z_star, _ = brute_force_optimum(model)

    refs = run_relax_and_cut(model, RefGenConfig(max_iterations=20))

    assert refs.status == "complete"

    for value in refs.dual_values:
        assert value <= z_star + 1e-6

    relaxed = lp_relaxation(model)
    for x in refs.all_solutions:
        assert check_feasible(relaxed, x, tol=1e-6)

    for sol in refs.integral_found:
        assert check_feasible(model, sol.values)
        assert sol.objective_value >= z_star - 1e-6


def test_dual_bound_long_run():

    model = small_model()
    z_star, _ = brute_force_optimum(model)

    refs = run_relax_and_cut(model, RefGenConfig(max_iterations=100))

    assert z_star == -2
    assert max(refs.dual_values) <= z_star + 1e-6


def test_reference_set_repr():

    refs = ReferenceSet([np.zeros(2)])
    assert "1 solutions" in repr(refs)
