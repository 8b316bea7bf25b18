"""Rigorous evaluation of the series ``sum_k 2^p / ((2k+1)(2k+3))^p``.

The term ``t(x) = 2^p ((2x+1)(2x+3))^(-p)`` is positive, decreasing and
convex on ``x >= 0``, so for every ``K >= 1``

    int_K^inf t + t(K)/2  <=  sum_{k>=K} t(k)  <=  int_{K-1/2}^inf t

(trapezoid rule overestimates, midpoint rule underestimates a convex
integral). The integral is evaluated with ``u = 2x + 2`` and the binomial
series ``(u^2 - 1)^(-p) = u^(-2p) sum_m c_m u^(-2m)``, whose remainder is
dominated by a geometric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError, DivergenceError, InvalidParameterError

_EPS = np.finfo(float).eps
MAX_TERMS = 1 << 26


@dataclass(frozen=True)
class TailBound:
    """A computed value with a rigorous bound on its absolute error."""

    value: float
    error: float
    terms_used: int

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error", float(self.error))
        if not self.error >= 0:
            raise InvalidParameterError("error bound must be non-negative")

    @property
    def lower(self) -> float:
        return self.value - self.error

    @property
    def upper(self) -> float:
        return self.value + self.error

    def to_dict(self) -> dict:
        return {"value": self.value, "error": self.error, "terms_used": self.terms_used}

    @classmethod
    def from_dict(cls, data: dict) -> "TailBound":
        return cls(float(data["value"]), float(data["error"]), int(data["terms_used"]))


def _need_convergent(p: float) -> float:
    p = float(p)
    if not p > 0.5:
        raise DivergenceError(f"the series diverges for p <= 1/2 (terms decay like k^(-2p)); p={p}")
    return p


def jump_terms(p: float, ks) -> np.ndarray:
    """``t(k) = 2^p / ((2k+1)(2k+3))^p`` for an array of ``k``."""
    k = np.asarray(ks, dtype=float)
    return np.exp(p * (math.log(2.0) - np.log((2 * k + 1) * (2 * k + 3))))


def _integral(p: float, x: float) -> tuple[float, float]:
    """``int_x^inf t`` and an error bound, for ``x >= 1/2``."""
    u = 2.0 * x + 2.0
    inv2 = 1.0 / (u * u)
    total, coeff, power, m = 0.0, 1.0, u ** (1.0 - 2.0 * p), 0
    while True:
        term = coeff * power / (2.0 * p + 2.0 * m - 1.0)
        total += term
        # remaining terms shrink at least geometrically with this ratio
        rho = max(1.0, (p + m + 1) / (m + 2)) * inv2
        if rho < 1 and term * rho / (1.0 - rho) <= 1e-17 * total:
            rest = term * rho / (1.0 - rho)
            break
        coeff *= (p + m) / (m + 1)
        power *= inv2
        m += 1
    scale = 2.0 ** (p - 1.0)
    return scale * total, scale * (rest + 4 * (m + 1) * _EPS * total)


def tail_bound(p: float, start: int) -> TailBound:
    """Enclosure of ``sum_{k >= start} t(k)`` by the two integral comparisons."""
    p = _need_convergent(p)
    if start < 1:
        raise InvalidParameterError("start must be >= 1")
    lo, lo_err = _integral(p, float(start))
    lo += 0.5 * float(jump_terms(p, start))
    hi, hi_err = _integral(p, start - 0.5)
    lower, upper = lo - lo_err, hi + hi_err
    return TailBound(0.5 * (lower + upper), 0.5 * (upper - lower), 0)


def _partial(p: float, a: int, b: int) -> float:
    return math.fsum(jump_terms(p, np.arange(a, b)))


@lru_cache(maxsize=256)
def jump_series(p: float, tol: float = 1e-12) -> TailBound:
    """``S_p = sum_{k>=0} t(k)`` to absolute error ``tol``.

    The cut point ``K`` doubles until the tail enclosure is narrow enough.
    """
    p = _need_convergent(p)
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    k, head = 16, _partial(p, 0, 16)
    while True:
        tail = tail_bound(p, k)
        # each term carries a relative error of a few dozen ulps; fsum adds one more
        rounding = 64 * _EPS * head
        if tail.error + rounding <= tol:
            return TailBound(head + tail.value, tail.error + rounding, k)
        if 2 * k > MAX_TERMS:
            raise BudgetExceededError(f"tolerance {tol} not reached with {k} terms at p={p}")
        head += _partial(p, k, 2 * k)
        k *= 2


def jump_tail(p: float, start: int, tol: float = 1e-12) -> TailBound:
    """``sum_{k >= start} t(k)``: the full series minus an exact head."""
    full = jump_series(p, tol)
    if start <= 0:
        return full
    head = _partial(p, 0, start)
    value = max(full.value - head, 0.0)
    return TailBound(value, full.error + 64 * _EPS * full.value, full.terms_used)


def _power_root(s: TailBound, p: float, factor: float = 1.0) -> TailBound:
    """Propagate an enclosure of ``s`` through the increasing map ``(factor s)^(1/p)``."""
    f = lambda x: (factor * max(x, 0.0)) ** (1.0 / p)
    v = f(s.value)
    err = max(f(s.upper) - v, v - f(s.lower))
    return TailBound(v, err * (1 + 4 * _EPS) + 4 * _EPS * v, s.terms_used)


def cp_constant(p: float, tol: float = 1e-12) -> TailBound:
    """``C_p = (2 S_p)^(1/p)`` with a rigorous error at most ``tol``.

    Valid for ``1/2 < p <= 1``; ``C_1 = 2`` by telescoping.
    """
    p = float(p)
    _need_convergent(p)
    if p > 1:
        raise InvalidParameterError(f"the sharp constant is established only for p in (1/2, 1]; p={p}")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    inner = tol
    while True:
        out = _power_root(jump_series(p, inner), p, 2.0)
        if out.error <= tol:
            return out
        inner /= 4.0
        if inner < 1e-300:
            raise BudgetExceededError("tolerance is below floating-point resolution")


def conjectured_constant(p: float, tol: float = 1e-12) -> TailBound:
    """``C_p / 2^(1/p)``, the ratio attained by a delta."""
    c = cp_constant(p, tol)
    scale = 2.0 ** (-1.0 / float(p))
    return TailBound(c.value * scale, c.error * scale, c.terms_used)
