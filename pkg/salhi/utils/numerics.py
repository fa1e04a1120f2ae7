"""
One-dimensional numerics: golden-section search, grid-bracketed maximization
and finite-difference derivatives
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np

from salhi import config

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

# Objectives varying less than this over the search region are treated as flat
FLAT_TOLERANCE = 1e-14


def _finite_or_minus_inf(value: float) -> float:
    return value if math.isfinite(value) else -math.inf


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = config.GOLDEN_TOL) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal function on [a, b]

    Args:
        f: Objective
        a: Lower end of the bracket
        b: Upper end of the bracket
        tol: Width of the final bracket

    Returns:
        (x, f(x)) for the best interior point visited last
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = _finite_or_minus_inf(f(c))
    yd = _finite_or_minus_inf(f(d))

    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = _finite_or_minus_inf(f(c))
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = _finite_or_minus_inf(f(d))

    if yc > yd:
        return c, yc
    return d, yd


@dataclass(frozen=True)
class ScalarMaximum:
    """Result of a bounded one-dimensional maximization"""

    x: float
    value: float
    interior: bool
    flat: bool


def maximize_on_interval(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: int = config.PRESCAN_POINTS,
    tol: float = config.GOLDEN_TOL,
    candidates: Iterable[float] = (),
) -> ScalarMaximum:
    """
    Maximize f on [lo, hi]: uniform prescan, then golden-section refinement
    inside the bracket around the best grid point

    Args:
        f: Objective
        lo: Lower bound
        hi: Upper bound
        points: Prescan grid size
        tol: Golden-section tolerance
        candidates: Extra points that are always evaluated (ignored outside the bounds)

    Returns:
        ScalarMaximum; ties resolve to the smaller x
    """
    xs = np.linspace(lo, hi, max(points, 3))
    ys = np.array([_finite_or_minus_inf(f(float(x))) for x in xs])

    extra = [float(x) for x in candidates if lo <= x <= hi]
    extra_values = [_finite_or_minus_inf(f(x)) for x in extra]

    every_value = np.concatenate([ys, np.asarray(extra_values, dtype=float)])
    finite = every_value[np.isfinite(every_value)]
    if finite.size == 0 or float(finite.max() - finite.min()) < FLAT_TOLERANCE:
        return ScalarMaximum(x=float(lo), value=float(ys[0]), interior=False, flat=True)

    i = int(np.argmax(ys))
    best_x, best_y = float(xs[i]), float(ys[i])
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, len(xs) - 1)])
    x, y = golden_section_max(f, a, b, tol)
    if y > best_y:
        best_x, best_y = x, y

    for x, y in zip(extra, extra_values):
        if y > best_y or (y == best_y and x < best_x):
            best_x, best_y = x, y

    interior = (best_x - lo) > tol and (hi - best_x) > tol
    return ScalarMaximum(x=best_x, value=best_y, interior=interior, flat=False)


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order central first derivative"""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order central second derivative"""
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def relative_stationarity(f: Callable[[float], float], x0: float, h: float = None) -> float:
    """
    Relative distance from x0 to the stationary point one Newton step predicts

    |f'(x0)| / (|f''(x0)| * |x0|). Zero means x0 is a stationary point; the
    value is independent of the scale of f.

    Args:
        f: Smooth function of one variable
        x0: Point to test, nonzero
        h: Finite-difference step, defaults to 1e-6 * |x0|
    """
    if h is None:
        h = 1e-6 * abs(x0)
    first = central_difference(f, x0, h)
    second = second_difference(f, x0, h)
    if second == 0.0:
        return math.inf if first != 0.0 else 0.0
    return abs(first) / (abs(second) * abs(x0))
