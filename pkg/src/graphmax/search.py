"""Lower estimates of ``||M_G||_p`` and ``C_{G,p}`` by search.

Three independent routes are provided:

* grid oracles -- the exact maximum of the ratio over a regular grid of the
  normalized domain (every coordinate in ``{0, step, ..., 1}`` with one
  coordinate pinned to 1, and for the variation one more pinned to 0);
* multi-start cyclic coordinate ascent with golden-section line searches;
* structured families for the star and the complete graph, parametrized by
  the few values an extremizer is known to take.

All searches work with nonnegative functions: every ratio is unchanged by
``f -> |f|``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ._kernels import KIND_NORM, KIND_VARIATION, ratio_single
from .errors import BudgetExceededError, InvalidParameterError
from .graph import Graph, build_named
from .maximal import (
    maximal_batch,
    norm_ratio_batch,
    p_variation_batch,
    variation_ratio_batch,
)
from .optimize import golden_section_max, maximize_scalar

NORM = "norm_ratio"
VARIATION = "variation_ratio"
GRID_BUDGET = 10**9
EXHAUSTIVE_LIMIT = 2 * 10**6
_CHUNK = 1 << 16
_REL_TIE = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    grid_step: float = 0.05
    restarts: int = 32
    max_iters: int = 500
    tolerance: float = 1e-9
    seed: int = 0
    line_scan: int = 65

    def __post_init__(self):
        if not 0 < self.grid_step < 1:
            raise InvalidParameterError("grid_step must lie in (0, 1)")
        if abs(1.0 / self.grid_step - round(1.0 / self.grid_step)) > 1e-12 / self.grid_step:
            raise InvalidParameterError(f"grid_step {self.grid_step} does not divide 1")
        if self.restarts < 1 or self.max_iters < 1:
            raise InvalidParameterError("restarts and max_iters must be positive")
        if not self.tolerance > 0:
            raise InvalidParameterError("tolerance must be positive")
        if self.line_scan < 3:
            raise InvalidParameterError("line_scan must be at least 3")


@dataclass
class SearchResult:
    best_value: float
    argmax: np.ndarray
    objective: str
    p: float
    evaluations: int
    structure_note: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "best_value": float(self.best_value),
            "argmax": [float(v) for v in self.argmax],
            "objective": self.objective,
            "p": float(self.p),
            "evaluations": int(self.evaluations),
            "structure_note": self.structure_note,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SearchResult":
        return cls(
            best_value=float(data["best_value"]),
            argmax=np.asarray(data["argmax"], dtype=float),
            objective=data["objective"],
            p=float(data["p"]),
            evaluations=int(data["evaluations"]),
            structure_note=data.get("structure_note", ""),
            extra=dict(data.get("extra", {})),
        )


def _check_p(p: float) -> float:
    p = float(p)
    if not p > 0:
        raise InvalidParameterError(f"exponent p must be positive, got {p}")
    return p


def objective_batch(g: Graph, fs: np.ndarray, p: float, objective: str) -> np.ndarray:
    if objective == NORM:
        return norm_ratio_batch(g, fs, p)
    if objective == VARIATION:
        return variation_ratio_batch(g, fs, p)
    raise InvalidParameterError(f"unknown objective {objective!r}")


def describe_structure(f: np.ndarray, atol: float = 1e-9) -> str:
    f = np.asarray(f, float)
    nonzero = np.flatnonzero(np.abs(f) > atol)
    if nonzero.size == 1:
        return f"delta at vertex {int(nonzero[0])}"
    distinct = []
    for v in np.sort(f):
        if not distinct or v - distinct[-1] > atol:
            distinct.append(v)
    if len(distinct) == 1:
        return "constant"
    if len(distinct) == 2:
        return "two-valued"
    return f"{len(distinct)}-valued"


def normalize_norm_candidate(f) -> np.ndarray:
    """Scale a nonnegative function so that its maximum is exactly 1."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise InvalidParameterError("norm candidates must be nonnegative")
    top = f.max() if f.size else 0.0
    if top == 0:
        raise InvalidParameterError("cannot normalize the zero function")
    out = f / top
    out[f == top] = 1.0
    return out


def normalize_variation_candidate(f) -> np.ndarray:
    """Map a nonnegative function affinely onto min 0 and max 1.

    The variation ratio is invariant under this map for nonnegative inputs:
    subtracting ``min f`` shifts ``M f`` by the same constant and scaling is
    homogeneous.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise InvalidParameterError("variation candidates must be nonnegative")
    lo, hi = f.min(), f.max()
    if hi == lo:
        raise InvalidParameterError("constant functions have zero variation")
    out = (f - lo) / (hi - lo)
    out[f == lo] = 0.0
    out[f == hi] = 1.0
    return out


class _Incumbent:
    """Running maximum with lexicographically-smallest tie-break."""

    def __init__(self):
        self.value = -math.inf
        self.arg: np.ndarray | None = None

    def tie_tol(self, value: float) -> float:
        return _REL_TIE * max(1.0, abs(value))

    def offer(self, values: np.ndarray, rows: np.ndarray) -> None:
        if values.size == 0:
            return
        top = float(values.max())
        if top < self.value - self.tie_tol(self.value):
            return
        cutoff = max(top, self.value) - self.tie_tol(max(top, self.value))
        idx = np.flatnonzero(values >= cutoff)
        cand = rows[idx]
        order = np.lexsort(cand.T[::-1])
        pick = cand[order[0]]
        pick_val = float(values[idx[order[0]]])
        if self.arg is None or self.value < cutoff:
            self.value, self.arg = pick_val, pick.copy()
        elif tuple(pick) < tuple(self.arg):
            self.value, self.arg = pick_val, pick.copy()


def _levels(step: float) -> int:
    m = int(round(1.0 / step))
    if not 0 < step < 1 or abs(m * step - 1.0) > 1e-12:
        raise InvalidParameterError(f"grid step {step} must lie in (0,1) and divide 1")
    return m


def _insert_pinned(free: np.ndarray, n: int, pinned: dict[int, float]) -> np.ndarray:
    out = np.empty((free.shape[0], n))
    others = [i for i in range(n) if i not in pinned]
    out[:, others] = free
    for i, v in pinned.items():
        out[:, i] = v
    return out


def _exhaustive(g: Graph, p: float, m: int, objective: str, pins: list[dict[int, float]],
                budget: float) -> tuple[_Incumbent, int]:
    n = g.n
    free = n - len(pins[0])
    total = (m + 1) ** free * len(pins)
    if total > budget:
        raise BudgetExceededError(f"grid has {total:.3g} points, budget is {budget:.3g}")
    inc = _Incumbent()
    per_pin = (m + 1) ** free
    for pin in pins:
        for start in range(0, per_pin, _CHUNK):
            flat = np.arange(start, min(start + _CHUNK, per_pin))
            idx = np.stack(np.unravel_index(flat, (m + 1,) * free), axis=1) if free else \
                np.zeros((1, 0), dtype=int)
            fs = _insert_pinned(idx / m, n, pin)
            inc.offer(objective_batch(g, fs, p, objective), fs)
    return inc, total


def _bnb_norm(g: Graph, p: float, m: int, budget: float) -> tuple[_Incumbent, int]:
    """Exact grid maximum of the norm ratio by branch and bound.

    ``M_G`` is monotone, so on a box ``lo <= f <= hi`` the ratio is bounded
    by ``||M hi||_p^p / ||lo||_p^p``. Boxes whose bound is below the
    incumbent are discarded; the rest are bisected down to single points.
    """
    n = g.n
    inc = _Incumbent()
    evals = 0
    # seed the incumbent with a coarse sub-grid
    coarse = m
    while coarse > 8 and coarse % 2 == 0:
        coarse //= 2
    if (coarse + 1) ** (n - 1) * n <= EXHAUSTIVE_LIMIT:
        seed_inc, seed_evals = _exhaustive(g, p, coarse, NORM,
                                           [{j: 1.0} for j in range(n)], budget)
        inc.offer(np.array([seed_inc.value]), seed_inc.arg[None, :])
        evals += seed_evals
    for j in range(n):
        pin = {j: 1.0}
        stack = [(np.zeros((1, n - 1), dtype=np.int64), np.full((1, n - 1), m, dtype=np.int64))]
        while stack:
            lo, hi = stack.pop()
            mid = (lo + hi) // 2
            mid_f = _insert_pinned(mid / m, n, pin)
            inc.offer(norm_ratio_batch(g, mid_f, p), mid_f)
            lo_f = _insert_pinned(lo / m, n, pin)
            hi_f = _insert_pinned(hi / m, n, pin)
            upper = np.sum(maximal_batch(g, hi_f) ** p, axis=1) / np.sum(lo_f ** p, axis=1)
            evals += 3 * lo.shape[0]
            if evals > budget:
                raise BudgetExceededError(f"branch and bound exceeded {budget:.3g} evaluations")
            threshold = (inc.value * (1.0 - _REL_TIE)) ** p
            width = hi - lo
            keep = (upper >= threshold) & (width.max(axis=1) > 0)
            lo, hi, width = lo[keep], hi[keep], width[keep]
            if lo.shape[0] == 0:
                continue
            dim = np.argmax(width, axis=1)
            rows = np.arange(lo.shape[0])
            cut = (lo[rows, dim] + hi[rows, dim]) // 2
            hi_a = hi.copy()
            hi_a[rows, dim] = cut
            lo_b = lo.copy()
            lo_b[rows, dim] = cut + 1
            children_lo = np.concatenate([lo, lo_b])
            children_hi = np.concatenate([hi_a, hi])
            for s in range(0, children_lo.shape[0], _CHUNK):
                stack.append((children_lo[s:s + _CHUNK], children_hi[s:s + _CHUNK]))
    return inc, evals


def _grid_result(inc: _Incumbent, objective: str, p: float, evals: int, step: float,
                 method: str) -> SearchResult:
    return SearchResult(inc.value, inc.arg, objective, p, evals, describe_structure(inc.arg),
                        {"grid_step": step, "method": method})


def grid_oracle_norm(g: Graph, p: float, step: float, *, method: str = "auto",
                     budget: float = GRID_BUDGET) -> SearchResult:
    """Exact maximum of ``||M f||_p / ||f||_p`` over the grid of step ``step``.

    ``method`` is ``"exhaustive"`` (refuses grids with more than ``budget``
    points), ``"bnb"`` (same maximum by branch and bound; ``budget`` caps the
    evaluations actually performed) or ``"auto"``.
    """
    p = _check_p(p)
    m = _levels(step)
    nominal = (m + 1) ** (g.n - 1) * g.n
    if method == "auto":
        method = "exhaustive" if nominal <= EXHAUSTIVE_LIMIT else "bnb"
    if method == "exhaustive":
        inc, evals = _exhaustive(g, p, m, NORM, [{j: 1.0} for j in range(g.n)], budget)
    elif method == "bnb":
        inc, evals = _bnb_norm(g, p, m, budget)
    else:
        raise InvalidParameterError(f"unknown grid method {method!r}")
    return _grid_result(inc, NORM, p, evals, step, method)


def grid_oracle_variation(g: Graph, p: float, step: float, *,
                          budget: float = GRID_BUDGET) -> SearchResult:
    """Exact maximum of ``Var_p(M f) / Var_p(f)`` over the grid of step ``step``.

    One coordinate is pinned to 1 and another to 0.
    """
    p = _check_p(p)
    m = _levels(step)
    if g.n < 2:
        raise InvalidParameterError("variation ratio needs at least two vertices")
    pins = [{i: 1.0, j: 0.0} for i in range(g.n) for j in range(g.n) if i != j]
    inc, evals = _exhaustive(g, p, m, VARIATION, pins, budget)
    return _grid_result(inc, VARIATION, p, evals, step, "exhaustive")


def _coordinate_ascent(g: Graph, p: float, cfg: SearchConfig, objective: str,
                       normalize: Callable[[np.ndarray], np.ndarray],
                       starts: np.ndarray) -> SearchResult:
    scan = np.linspace(0.0, 1.0, cfg.line_scan)
    line_tol = max(cfg.tolerance, 1e-10)
    evals = 0
    inc = _Incumbent()
    n = g.n

    ops = np.ascontiguousarray(g.averaging_operators)
    edges = np.ascontiguousarray(g.edge_array).astype(np.int64)
    kind = KIND_NORM if objective == NORM else KIND_VARIATION

    def single(f: np.ndarray) -> float:
        return ratio_single(ops, edges, f, p, kind)

    for f0 in starts:
        f = normalize(f0)
        value = single(f)
        evals += 1
        for _ in range(cfg.max_iters):
            before = value
            for i in range(n):
                trial = np.repeat(f[None, :], scan.size, axis=0)
                trial[:, i] = scan
                vals = objective_batch(g, trial, p, objective)
                evals += scan.size
                k = int(np.argmax(vals))
                a, b = scan[max(k - 1, 0)], scan[min(k + 1, scan.size - 1)]

                def along(t: float, i=i) -> float:
                    h = f.copy()
                    h[i] = t
                    return single(h)

                refined = golden_section_max(along, a, b, tol=line_tol)
                evals += refined.evaluations
                cand_x, cand_v = (refined.x, refined.value) if refined.value >= vals[k] \
                    else (scan[k], vals[k])
                if cand_v > value:
                    f[i] = cand_x
                    value = cand_v
            f = normalize(f)
            value = single(f)
            evals += 1
            if value - before <= cfg.tolerance * max(1.0, abs(value)):
                break
        inc.offer(np.array([value]), f[None, :])
    return SearchResult(inc.value, inc.arg, objective, p, evals, describe_structure(inc.arg),
                        {"starts": int(len(starts))})


def _ascent_starts(n: int, cfg: SearchConfig, objective: str) -> np.ndarray:
    eye = np.eye(n)
    structured = [eye]
    if objective == VARIATION:
        structured.append(1.0 - eye)
    rng = np.random.default_rng(cfg.seed)
    random = rng.random((cfg.restarts, n))
    random[np.arange(cfg.restarts), rng.integers(0, n, cfg.restarts)] = 1.0
    if objective == VARIATION:
        random[np.arange(cfg.restarts), rng.integers(0, n, cfg.restarts)] = 0.0
        flat = random.max(axis=1) == random.min(axis=1)
        random[flat] = eye[0]
    return np.concatenate(structured + [random])


def ascent_norm(g: Graph, p: float, cfg: SearchConfig | None = None) -> SearchResult:
    """Multi-start cyclic coordinate ascent for the norm ratio.

    Starts are every delta function plus ``cfg.restarts`` seeded random
    points; the result is therefore never below the best delta ratio.
    """
    cfg = cfg or SearchConfig()
    p = _check_p(p)
    return _coordinate_ascent(g, p, cfg, NORM, normalize_norm_candidate,
                              _ascent_starts(g.n, cfg, NORM))


def ascent_variation(g: Graph, p: float, cfg: SearchConfig | None = None) -> SearchResult:
    """Multi-start cyclic coordinate ascent for the variation ratio."""
    cfg = cfg or SearchConfig()
    p = _check_p(p)
    if g.n < 2:
        raise InvalidParameterError("variation ratio needs at least two vertices")
    return _coordinate_ascent(g, p, cfg, VARIATION, normalize_variation_candidate,
                              _ascent_starts(g.n, cfg, VARIATION))


class StarNormFormula(NamedTuple):
    value: float
    x_star: float
    heuristic: bool


def star_profile_ratio(n: int, p: float, x):
    """``(1 + (n-1)((x+1)/2)^p) / (1 + (n-1) x^p)``; vectorized in ``x``."""
    x = np.asarray(x, dtype=float)
    return (1.0 + (n - 1) * ((x + 1.0) / 2.0) ** p) / (1.0 + (n - 1) * x ** p)


def star_norm_formula(n: int, p: float) -> StarNormFormula:
    """Closed-form one-parameter expression for ``||M_{S_n}||_p``.

    Exact for ``1 < p <= 2``. Outside that range the same supremum is
    returned with ``heuristic=True``: it is known to hold only for ``n``
    above an unspecified threshold.
    """
    if n < 3:
        raise InvalidParameterError("star formula needs n >= 3")
    p = _check_p(p)
    best = maximize_scalar(lambda x: float(star_profile_ratio(n, p, x)), 0.0, 1.0 - 1e-12,
                           scan=1000, tol=1e-12, batch=lambda xs: star_profile_ratio(n, p, xs))
    return StarNormFormula(best.value ** (1.0 / p), best.x, not 1.0 < p <= 2.0)


def _star_family(n: int, s: int, x, y) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    fs = np.empty((max(x.size, y.size), n))
    fs[:, 0] = 1.0
    fs[:, 1:1 + s] = x[:, None]
    fs[:, 1 + s:] = y[:, None]
    return fs


def star_norm_structured(n: int, p: float, *, grid: int = 101) -> SearchResult:
    """Best norm ratio on ``S_n`` over center 1, ``s`` leaves at ``x``, the rest at ``y``.

    ``0 <= x <= y <= 1``; the case ``s = 0`` is a one-dimensional search in
    ``y``. For ``s >= 1`` the pair is parametrized as ``x = t*y`` and
    refined by cyclic golden-section from the best point of a coarse grid.
    """
    if n < 3:
        raise InvalidParameterError("star search needs n >= 3")
    p = _check_p(p)
    star = build_named("star", n)
    inc = _Incumbent()
    evals = 0

    def ratio(fs):
        return norm_ratio_batch(star, fs, p)

    one_d = maximize_scalar(lambda y: float(ratio(_star_family(n, 0, 0.0, y))[0]), 0.0, 1.0,
                            scan=1000, tol=1e-12,
                            batch=lambda ys: ratio(_star_family(n, 0, np.zeros_like(ys), ys)))
    evals += one_d.evaluations
    inc.offer(np.array([one_d.value]), _star_family(n, 0, 0.0, one_d.x))
    for s in range(1, n - 1):
        tt, yy = np.meshgrid(np.linspace(0, 1, grid), np.linspace(0, 1, grid), indexing="ij")
        tt, yy = tt.ravel(), yy.ravel()
        vals = ratio(_star_family(n, s, tt * yy, yy))
        evals += vals.size
        k = int(np.nanargmax(vals))
        t, y, v = tt[k], yy[k], float(vals[k])
        for _ in range(200):
            before = v
            rt = golden_section_max(lambda u: float(ratio(_star_family(n, s, u * y, y))[0]),
                                    max(t - 0.02, 0.0), min(t + 0.02, 1.0), tol=1e-12)
            if rt.value > v:
                t, v = rt.x, rt.value
            ry = golden_section_max(lambda u: float(ratio(_star_family(n, s, t * u, u))[0]),
                                    max(y - 0.02, 0.0), min(y + 0.02, 1.0), tol=1e-12)
            if ry.value > v:
                y, v = ry.x, ry.value
            evals += rt.evaluations + ry.evaluations
            if v - before <= 1e-15:
                break
        inc.offer(np.array([v]), _star_family(n, s, t * y, y))
    f = inc.arg
    leaves = f[1:]
    note = "single leaf value" if np.ptp(leaves) < 1e-6 else "two leaf values"
    return SearchResult(inc.value, f, NORM, p, evals, note,
                        {"x": float(leaves.min()), "y": float(leaves.max())})


def complete_norm_structured(n: int, p: float) -> SearchResult:
    """Best norm ratio on ``K_n`` over functions equal to 1 on ``k`` vertices and ``x`` elsewhere."""
    if n < 2:
        raise InvalidParameterError("complete search needs n >= 2")
    p = float(p)
    if not p >= 1.0 + 1e-9:
        raise InvalidParameterError("the two-value reduction requires p > 1")
    kn = build_named("complete", n)
    inc = _Incumbent()
    evals = 0

    def family(k, xs):
        xs = np.atleast_1d(np.asarray(xs, float))
        fs = np.repeat(xs[:, None], n, axis=1)
        fs[:, :k] = 1.0
        return fs

    best_k = 1
    for k in range(1, n):
        res = maximize_scalar(lambda x: float(norm_ratio_batch(kn, family(k, x), p)[0]), 0.0, 1.0,
                              scan=1000, tol=1e-12,
                              batch=lambda xs: norm_ratio_batch(kn, family(k, xs), p))
        evals += res.evaluations
        previous = inc.value
        inc.offer(np.array([res.value]), family(k, res.x))
        if inc.value != previous:
            best_k = k
    return SearchResult(inc.value, inc.arg, NORM, p, evals, describe_structure(inc.arg),
                        {"k": best_k, "x": float(inc.arg.min())})
