import math

import numpy as np
import pytest

from .statistics import percentage, relative_quotient, shifted_geomean


def test_shifted_geomean_two_values():

    assert shifted_geomean([1, 9], 1) == pytest.approx(math.sqrt(20) - 1, abs=1e-9)


@pytest.mark.parametrize("shift", [0, 1, 100])
def test_shifted_geomean_singleton(shift):

    assert shifted_geomean([5], shift) == 5


def test_shifted_geomean_constant():

    assert shifted_geomean([7.5] * 10, 100) == 7.5


def test_shifted_geomean_shift_zero_is_geomean():

    assert shifted_geomean([1, 4, 16], 0) == pytest.approx(4)


def test_shifted_geomean_order_invariant():

    rng = np.random.default_rng(0)
    values = rng.uniform(0, 1000, size=50)

    expected = shifted_geomean(values, 100)
    assert shifted_geomean(rng.permutation(values), 100) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "values, shift", [([], 1), ([1, -1], 1), ([1, np.nan], 1), ([1, 2], -1)]
)
def test_shifted_geomean_errors(values, shift):

    with pytest.raises(ValueError):
        shifted_geomean(values, shift)


def test_relative_quotient():

    assert relative_quotient(1, 2) == 0.5
    assert np.isnan(relative_quotient(1, 0))
    assert np.isnan(relative_quotient(np.nan, 2))


def test_percentage():

    assert percentage([True, False, False, True]) == 50
    assert percentage([False]) == 0
    assert np.isnan(percentage([]))
