"""Closed-form sharp constants, explicit lower bounds and p -> infinity limits.

Everything here is either a direct formula or a low-dimensional
maximization of one (coarse scan, then golden-section).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError
from .graph import Graph
from .maximal import p_variation, graph_maximal
from .optimize import golden_section_max, maximize_scalar

LOG4_LOG6 = math.log(4.0) / math.log(6.0)
_U_CAP = 512.0  # y^p = e^u stays finite


@dataclass(frozen=True)
class ConstantReport:
    """One row of a constants table (serialized as JSON or CSV)."""

    name: str
    n: int
    value: float
    exact: bool
    p: float | None = None
    attaining_params: dict | None = None

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        out["value"] = float(f"{self.value:.12g}")
        return out


def _need_n(n: int, minimum: int) -> int:
    if int(n) != n or n < minimum:
        raise InvalidParameterError(f"n must be an integer >= {minimum}, got {n}")
    return int(n)


def _need_p(p: float, minimum: float = 1.0) -> float:
    p = float(p)
    if not p >= minimum:
        raise InvalidParameterError(f"p must be >= {minimum}, got {p}")
    return p


# -- star and complete graph norms ------------------------------------------------

def soria_tradacete_star_bounds(n: int, p: float) -> tuple[float, float]:
    """Lower and upper bounds ``1 + (n-1)/2^p`` and ``(n+5)/2`` on ``||M_{S_n}||_p^p``."""
    n = _need_n(n, 2)
    p = _need_p(p)
    return 1.0 + (n - 1) / 2.0 ** p, (n + 5) / 2.0


def kn_lower_bound(n: int, p: float, alpha: float, k: int) -> float:
    """Ratio ``||M f||_p^p / ||f||_p^p`` on ``K_n`` for the two-level test function.

    The function equals ``(n alpha^(1/p) - (n-k)) / k`` on ``k`` vertices
    and 1 elsewhere, so its mean is ``alpha^(1/p)``.
    """
    n = _need_n(n, 2)
    p = _need_p(p)
    if not alpha > 1:
        raise InvalidParameterError("alpha must exceed 1")
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must lie in 1..{n}")
    if k == n:
        return 1.0
    top = (n * alpha ** (1.0 / p) - (n - k)) / k
    tp = top ** p
    return (k * tp + (n - k) * alpha) / (k * tp + (n - k))


def _kn_limit_objective(n: int, k: int, log_alpha):
    # (k a^(n/k) + a (n-k)) / (k a^(n/k) + n - k), divided through by a^(n/k)
    t = np.asarray(log_alpha, dtype=float)
    if k == n:
        return np.ones_like(t)
    return (k + (n - k) * np.exp((1.0 - n / k) * t)) / (k + (n - k) * np.exp(-(n / k) * t))


class KnLimit(NamedTuple):
    value: float
    alpha_star: float
    k_star: int


def kn_limit(n: int) -> KnLimit:
    """``lim_{p->inf} ||M_{K_n}||_p^p`` as a supremum over ``alpha > 1`` and ``k``.

    For each ``k`` the bracket ``(1, alpha_max]`` doubles until the objective
    has decreased over five consecutive doublings, then a log-spaced scan and
    golden-section refinement locate the maximum.
    """
    n = _need_n(n, 3)
    best = KnLimit(1.0, 1.0, n)
    for k in range(1, n):
        log_max = math.log(2.0)
        prev = float(_kn_limit_objective(n, k, log_max))
        drops = 0
        while drops < 5 and log_max < _U_CAP:
            log_max += math.log(2.0)
            cur = float(_kn_limit_objective(n, k, log_max))
            # <= so that a saturated objective (exactly 1.0) still counts as falling
            drops = drops + 1 if cur <= prev else 0
            prev = cur
        res = maximize_scalar(lambda t: float(_kn_limit_objective(n, k, t)), 1e-12, log_max,
                              scan=1000, tol=1e-13,
                              batch=lambda ts: _kn_limit_objective(n, k, ts))
        if res.value > best.value:
            best = KnLimit(res.value, math.exp(res.x), k)
    return best


def star_lower_bound(n: int, p: float) -> float:
    """Explicit lower bound on ``||M_{S_n}||_p^p``; decreases to ``(1 + sqrt n)/2``."""
    n = _need_n(n, 3)
    p = _need_p(p)
    if math.isinf(p):
        return (1.0 + math.sqrt(n)) / 2.0
    c = 1.0 + math.sqrt(n)
    # (2 c^(1/p) - 1)^p computed in log form; it tends to c^2
    head = math.exp(p * math.log(2.0 * math.exp(math.log(c) / p) - 1.0))
    return (head + (n - 1) * c) / (head + (n - 1))


class StarNormStar(NamedTuple):
    value: float
    y_star: float
    ratio: float  # value ** p, computed without the final root


def _star_star_objective(n: int, p: float, u):
    # y = exp(u/p); ratio divided through by y^p
    u = np.asarray(u, dtype=float)
    y = np.exp(u / p)
    half = np.exp(p * (np.log1p(y) - math.log(2.0)) - u)  # ((1+y)/(2y))^p
    return (1.0 + (n - 1) * half) / (1.0 + (n - 1) * np.exp(-u))


def star_norm_star(n: int, p: float) -> StarNormStar:
    """``sup_{y>=1} ((y^p + (n-1)((1+y)/2)^p) / (y^p + n - 1))^(1/p)``.

    The search runs in ``u = p log y`` (so ``y^p = e^u``), which keeps the
    scale of the maximizer independent of ``p``; the ``u`` bracket doubles
    until the objective has fallen for five consecutive doublings. As
    ``y -> inf`` the ratio tends to ``1 + (n-1)/2^p``; when that limit is
    not beaten (e.g. ``p = 1``) it is returned with ``y_star = inf``.
    """
    n = _need_n(n, 3)
    p = _need_p(p)
    limit = 1.0 + (n - 1) * 2.0 ** (-p)
    u_max = 1.0
    prev = float(_star_star_objective(n, p, u_max))
    drops = 0
    while drops < 5 and u_max < _U_CAP:
        u_max = min(2.0 * u_max, _U_CAP)
        cur = float(_star_star_objective(n, p, u_max))
        drops = drops + 1 if cur < prev else 0
        prev = cur
    res = maximize_scalar(lambda u: float(_star_star_objective(n, p, u)), 0.0, u_max,
                          scan=1000, tol=1e-13, batch=lambda us: _star_star_objective(n, p, us))
    if limit >= res.value:
        return StarNormStar(limit ** (1.0 / p), math.inf, limit)
    ratio = max(res.value, 1.0)
    return StarNormStar(ratio ** (1.0 / p), math.exp(res.x / p), ratio)


def _star_remark_objective(n: int, s: int, a2, a4):
    a2 = np.asarray(a2, float)
    a4 = np.asarray(a4, float)
    k = n - s - 1
    num = a2 ** 2 + s * a2 + k * a2 ** (2.0 / n) * a4 ** (k / n)
    den = a2 ** 2 + s + k * a4
    return num / den


def _star_remark_feasible(n: int, s: int, a2, a4):
    k = n - s - 1
    return np.asarray(a2, float) ** (2.0 / n) * np.asarray(a4, float) ** (k / n) > \
        np.asarray(a2, float) * np.sqrt(a4)


class StarLimit(NamedTuple):
    value: float
    exact: bool
    sup_constrained: float | None = None
    attaining: tuple | None = None


def star_limit_constrained_sup(n: int, grid: int = 400,
                               alpha2_max: float | None = None) -> tuple[float, tuple]:
    """Numeric sup of the constrained three-parameter term for small ``n``.

    ``s`` ranges over ``1..n-2``, ``alpha_2`` over a log grid on
    ``[1, alpha2_max]`` (default ``(6/5)^n``) and ``alpha_4`` over ``[0, 1]``;
    infeasible points are dropped, and the best feasible point is refined
    coordinate-wise. Returns ``-inf`` when no grid point is feasible.
    """
    best_val, best_arg = -math.inf, ()
    log_top = n * math.log(1.2) if alpha2_max is None else math.log(alpha2_max)
    la2 = np.linspace(0.0, log_top, grid)
    a4s = np.linspace(0.0, 1.0, grid)
    A2, A4 = np.meshgrid(np.exp(la2), a4s, indexing="ij")
    for s in range(1, n - 1):
        feas = _star_remark_feasible(n, s, A2, A4)
        if not feas.any():
            continue
        vals = np.where(feas, _star_remark_objective(n, s, A2, A4), -np.inf)
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        x, a4, v = la2[i], a4s[j], float(vals[i, j])

        def obj(lx, la4):
            a2 = math.exp(lx)
            if not _star_remark_feasible(n, s, a2, la4):
                return -math.inf
            return float(_star_remark_objective(n, s, a2, la4))

        dx, da = log_top / grid, 1.0 / grid
        for _ in range(100):
            before = v
            r1 = golden_section_max(lambda t: obj(t, a4), max(x - dx, 0.0), min(x + dx, log_top),
                                    tol=1e-13)
            if r1.value > v:
                x, v = r1.x, r1.value
            r2 = golden_section_max(lambda t: obj(x, t), max(a4 - da, 0.0), min(a4 + da, 1.0),
                                    tol=1e-13)
            if r2.value > v:
                a4, v = r2.x, r2.value
            if v - before <= 1e-15:
                break
        if v > best_val:
            best_val, best_arg = v, (s, math.exp(x), float(a4))
    return best_val, best_arg


def star_limit(n: int, alpha2_max: float | None = None) -> StarLimit:
    """``lim_{p->inf} ||M_{S_n}||_p^p``.

    Exact ``(1 + sqrt n)/2`` for ``n >= 25``. For ``3 <= n <= 24`` the value
    is the max of that term and a numeric constrained supremum over a
    bounded box, and is flagged ``exact=False``.
    """
    n = _need_n(n, 3)
    base = (1.0 + math.sqrt(n)) / 2.0
    if n >= 25:
        return StarLimit(base, True)
    sup, arg = star_limit_constrained_sup(n, alpha2_max=alpha2_max)
    return StarLimit(max(base, sup), False, sup, arg)


# -- variation constants -----------------------------------------------------------

def star_var2_constant(n: int) -> float:
    """Sharp constant ``sqrt(n^2 - n - 1)/n`` for ``Var_2`` on ``S_n``."""
    n = _need_n(n, 3)
    return math.sqrt(n * n - n - 1) / n


def star_var2_extremizer(n: int, x: float, c: float) -> np.ndarray:
    """Extremizer for the ``Var_2`` constant on ``S_n`` (center first).

    Center ``x``, one leaf ``x + c(n-1)``, the other leaves ``x - c``.
    """
    n = _need_n(n, 3)
    if not 0 < c < x:
        raise InvalidParameterError(f"need 0 < c < x, got x={x}, c={c}")
    f = np.full(n, x - c, dtype=float)
    f[0] = x
    f[1] = x + c * (n - 1)
    return f


def kn_var_constant(n: int) -> float:
    """``C_{K_n,p} = 1 - 1/n``, valid for ``p >= log 4 / log 6``."""
    n = _need_n(n, 2)
    return 1.0 - 1.0 / n


def delta_variation_ratio(g: Graph, p: float, v: int) -> float:
    """``Var_p(M delta_v) / Var_p(delta_v)``, a certified lower bound for ``C_{G,p}``."""
    if not 0 <= v < g.n:
        raise InvalidParameterError(f"vertex {v} out of range")
    delta = np.zeros(g.n)
    delta[v] = 1.0
    return p_variation(g, graph_maximal(g, delta).values, p) / p_variation(g, delta, p)


def max_delta_variation_ratio(g: Graph, p: float) -> tuple[float, int]:
    """Best delta ratio over all vertices, with the smallest attaining vertex."""
    ratios = [delta_variation_ratio(g, p, v) for v in range(g.n)]
    v = int(np.argmax(ratios))
    return ratios[v], v
