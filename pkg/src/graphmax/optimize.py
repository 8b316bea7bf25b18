"""One-dimensional maximization: coarse pre-scan followed by golden-section.

Golden-section search is only correct for unimodal objectives. None of the
objectives here are known to be unimodal, so every bracket comes from a
dense pre-scan and the refined point is kept only if it beats the scan.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ScalarMax(NamedTuple):
    x: float
    value: float
    evaluations: int


def golden_section_max(fun: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
                       max_iter: int = 200) -> ScalarMax:
    """Golden-section search for a maximum of ``fun`` on ``[a, b]``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fun(d)
        evals += 1
    if fc >= fd:
        return ScalarMax(c, fc, evals)
    return ScalarMax(d, fd, evals)


def maximize_scalar(fun: Callable[[float], float], lo: float, hi: float, *, scan: int = 1000,
                    tol: float = 1e-12, batch: Callable[[np.ndarray], np.ndarray] | None = None,
                    ) -> ScalarMax:
    """Maximize ``fun`` on ``[lo, hi]``: ``scan``-point grid, then golden-section.

    ``batch``, when given, evaluates the objective on an array of points and
    is used for the pre-scan.
    """
    xs = np.linspace(lo, hi, scan)
    if batch is not None:
        ys = np.asarray(batch(xs), dtype=float)
    else:
        ys = np.array([fun(float(x)) for x in xs])
    ys = np.where(np.isnan(ys), -np.inf, ys)
    i = int(np.argmax(ys))
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, scan - 1)])
    refined = golden_section_max(fun, a, b, tol=tol)
    evals = scan + refined.evaluations
    if refined.value > ys[i]:
        return ScalarMax(refined.x, refined.value, evals)
    return ScalarMax(float(xs[i]), float(ys[i]), evals)
