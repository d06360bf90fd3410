import numpy as np
import scipy as sp
import scipy.stats


def shifted_geomean(values, shift):
    """shifted geometric mean

    Parameters
    ----------
    values : array-like of float
        Nonnegative values, e.g. times or node counts.
    shift : float
        Nonnegative shift; damps the influence of values close to 0.

    Returns
    -------
    mean : float
        ``exp(mean(log(values + shift))) - shift``

    Notes
    -----
    Singletons and constant lists return their value (up to rounding).
    """

    values = np.asarray(values, dtype=float).reshape(-1)

    if values.size == 0:
        raise ValueError("shifted geometric mean of an empty list is undefined")

    if shift < 0:
        raise ValueError(f"shift must not be negative, found {shift}")

    if np.any(values < 0) or np.isnan(values).any():
        raise ValueError("values must be nonnegative")

    if np.all(values == values[0]):
        return float(values[0])

    return float(sp.stats.gmean(values + shift) - shift)


def relative_quotient(value_a, value_b):
    """a / b; NaN if b is 0 or any value is NaN"""

    if np.isnan(value_a) or np.isnan(value_b) or value_b == 0:
        return np.nan

    return value_a / value_b


def percentage(mask):
    """share of True entries in percent; NaN for an empty selection"""

    mask = np.asarray(mask, dtype=bool)

    if mask.size == 0:
        return np.nan

    return 100 * mask.sum() / mask.size
