"""Centered and uncentered maximal functions on the integers.

Functions are finitely supported and stored as a trimmed window of values.
Outside the support every maximal value is a maximum over finitely many
candidate windows (one per possible far endpoint inside the support), so
all evaluations are exact finite maxima.

Far from the support the full-support window wins and the centered maximal
function is ``||f||_1 / (2 m + 1)`` with ``m`` the distance to the far
endpoint; its consecutive differences are then ``||f||_1`` times the terms
of the series in :mod:`graphmax.series`, which gives the analytic tail of
the variation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, InvalidParameterError, InvariantViolation
from .search import SearchConfig
from .series import TailBound, conjectured_constant, cp_constant, jump_tail

_EPS = np.finfo(float).eps
_CHUNK = 1 << 18
_SERIES_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class LatticeFunction:
    """``f: Z -> R`` equal to ``values[i]`` at ``offset + i`` and 0 elsewhere."""

    offset: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(vals)):
            raise InvalidParameterError("values must be finite")
        nz = np.flatnonzero(vals)
        if nz.size:
            off, vals = int(self.offset) + int(nz[0]), vals[nz[0]: nz[-1] + 1]
        else:
            off, vals = 0, vals[:0]
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "values", vals)

    def __eq__(self, other):
        return (isinstance(other, LatticeFunction) and self.offset == other.offset
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.offset, self.values.tobytes()))

    @property
    def is_zero(self) -> bool:
        return self.values.size == 0

    @property
    def support(self) -> tuple[int, int]:
        """First and last nonzero position."""
        self._need_nonzero()
        return self.offset, self.offset + self.values.size - 1

    def _need_nonzero(self):
        if self.is_zero:
            raise InvalidParameterError("the function has empty support")

    def __call__(self, n) -> np.ndarray:
        idx = np.asarray(n, dtype=np.int64) - self.offset
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.zeros(idx.shape)
        out[inside] = self.values[idx[inside]]
        return out

    def difference(self) -> "LatticeFunction":
        """Forward difference ``f(n+1) - f(n)``."""
        padded = np.concatenate([[0.0], self.values, [0.0]])
        return LatticeFunction(self.offset - 1, np.diff(padded))

    def __add__(self, other: "LatticeFunction") -> "LatticeFunction":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.support[1], other.support[1])
        n = np.arange(lo, hi + 1)
        return LatticeFunction(lo, self(n) + other(n))

    def scaled(self, c: float) -> "LatticeFunction":
        return LatticeFunction(self.offset, c * self.values)

    def shifted(self, k: int) -> "LatticeFunction":
        return LatticeFunction(self.offset + int(k), self.values)

    def to_dict(self) -> dict:
        return {"offset": self.offset, "values": self.values.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeFunction":
        return cls(int(data["offset"]), np.asarray(data["values"], dtype=float))

    @classmethod
    def from_json(cls, text: str) -> "LatticeFunction":
        return cls.from_dict(json.loads(text))


def delta(at: int = 0, height: float = 1.0) -> LatticeFunction:
    return LatticeFunction(at, np.array([height]))


def indicator(start: int, length: int) -> LatticeFunction:
    if length < 1:
        raise InvalidParameterError("length must be positive")
    return LatticeFunction(start, np.ones(length))


def tent(height: int = 10) -> LatticeFunction:
    """``max(height - |n|, 0)``."""
    n = np.arange(-height + 1, height)
    return LatticeFunction(-height + 1, height - np.abs(n).astype(float))


# -- maximal functions ----------------------------------------------------------------

def _window(window) -> np.ndarray:
    if isinstance(window, range):
        return np.arange(window.start, window.stop, window.step or 1, dtype=np.int64)
    return np.asarray(window, dtype=np.int64)


def _outside_right(cum: np.ndarray, a: int, ns: np.ndarray, width: int) -> np.ndarray:
    """``max_j T(a + j) / (width_j)`` for points ``n`` right of the support.

    ``T(a + j)`` is the mass of ``|f|`` on ``[a + j, b]`` and the window length
    is ``2 (n - a - j) + 1`` (centered) or ``n - a - j + 1`` (uncentered).
    """
    tails = cum[-1] - cum[:-1]  # T(a + j), j = 0..L-1
    j = np.arange(tails.size)
    out = np.empty(ns.size)
    for s in range(0, ns.size, _CHUNK):
        d = (ns[s:s + _CHUNK, None] - a - j[None, :]).astype(float)
        out[s:s + _CHUNK] = (tails[None, :] / (width * d + 1.0)).max(axis=1)
    return out


def _maximal(f: LatticeFunction, window, centered: bool) -> np.ndarray:
    ns = _window(window)
    if f.is_zero:
        return np.zeros(ns.size)
    a, b = f.support
    absval = np.abs(f.values)
    cum = np.concatenate([[0.0], np.cumsum(absval)])
    width = 2 if centered else 1
    out = np.empty(ns.size)
    right, left = ns > b, ns < a
    if right.any():
        out[right] = _outside_right(cum, a, ns[right], width)
    if left.any():
        rev = np.concatenate([[0.0], np.cumsum(absval[::-1])])
        out[left] = _outside_right(rev, -b, -ns[left], width)
    inside = ~(right | left)
    for i in np.flatnonzero(inside):
        k = int(ns[i]) - a  # index into values
        lo = np.arange(0, k + 1)  # window start index
        hi = np.arange(k, absval.size)  # window end index
        if centered:
            # radius r: window [k-r, k+r] clipped to the support, length 2r+1
            r = np.arange(0, max(k, absval.size - 1 - k) + 1)
            s = cum[np.minimum(k + r, absval.size - 1) + 1] - cum[np.maximum(k - r, 0)]
            out[i] = float(np.max(s / (2 * r + 1)))
        else:
            s = cum[hi[None, :] + 1] - cum[lo[:, None]]
            out[i] = float(np.max(s / (hi[None, :] - lo[:, None] + 1)))
    return out


def centered_maximal_z(f: LatticeFunction, window) -> np.ndarray:
    """``M f(n) = max_r (1/(2r+1)) sum_{|k-n| <= r} |f(k)|`` for ``n`` in ``window``.

    Radii beyond the distance to the far support endpoint only add zeros to
    the window, so the maximum over ``0 <= r <= R(n)`` is exact.
    """
    return _maximal(f, window, centered=True)


def uncentered_maximal_z(f: LatticeFunction, window) -> np.ndarray:
    """Maximal average of ``|f|`` over intervals ``[n - s, n + r]``, ``r, s >= 0``."""
    return _maximal(f, window, centered=False)


# -- variation ------------------------------------------------------------------------

def lattice_variation(f: LatticeFunction, p: float) -> float:
    """``(sum_n |f(n+1) - f(n)|^p)^(1/p)``; finite for every finitely supported ``f``."""
    p = float(p)
    if not p > 0:
        raise InvalidParameterError("p must be positive")
    if f.is_zero:
        return 0.0
    return float(np.sum(np.abs(f.difference().values) ** p) ** (1.0 / p))


def _switchover(tails: np.ndarray, a: int, b: int) -> int:
    """Smallest ``n > b`` from which the full-support window wins for good.

    With mass ``F = T(a)``, the candidate starting at ``a' = a + j`` loses to
    the full window at ``n`` iff ``F (2(n-a') + 1) >= T(a') (2(n-a) + 1)``,
    i.e. ``(2n+1)(F - T(a')) >= 2 a' F - 2 a T(a')``. Each of these is a
    lower bound on ``n`` and stays true for all larger ``n``.
    """
    total = tails[0]
    need = b + 1
    for j in range(1, tails.size):
        gap = total - tails[j]
        if gap <= 0:
            continue
        ap = a + j
        d = (2.0 * ap * total - 2.0 * a * tails[j]) / gap
        # a few extra points absorb rounding in the threshold itself
        need = max(need, int(math.ceil((d - 1.0) / 2.0)) + 2)
    return need


@dataclass(frozen=True)
class VariationSplit:
    """Diagnostics for :func:`z_variation`: exact head window and tail starts."""

    head_start: int
    head_stop: int
    head_sum: float
    right_tail: TailBound
    left_tail: TailBound


def z_variation_power(f: LatticeFunction, p: float, tol: float = 1e-12,
                      extra_head: int = 0) -> tuple[TailBound, VariationSplit]:
    """``sum_n |Mf(n+1) - Mf(n)|^p`` for the centered maximal function."""
    p = float(p)
    if not p > 0.5:
        raise DivergenceError(f"Var_p of Mf diverges for p <= 1/2 unless f = 0; p={p}")
    f._need_nonzero()
    a, b = f.support
    absval = np.abs(f.values)
    total = float(absval.sum())
    right_tails = total - np.concatenate([[0.0], np.cumsum(absval)])[:-1]
    left_tails = total - np.concatenate([[0.0], np.cumsum(absval[::-1])])[:-1]
    hi = _switchover(right_tails, a, b) + extra_head
    lo = -_switchover(left_tails, -b, -a) - extra_head
    head_sum = 0.0
    prev = None
    for s in range(lo, hi + 1, _CHUNK):
        vals = centered_maximal_z(f, range(s, min(s + _CHUNK, hi + 1)))
        if prev is not None:
            vals = np.concatenate([[prev], vals])
        head_sum += math.fsum(np.abs(np.diff(vals)) ** p)
        prev = vals[-1]
    # beyond hi: Mf(n) = F / (2(n - a) + 1), jumps F^p t(n - a) for n >= hi
    scale = total ** p
    series_tol = max(tol / 4.0 / max(scale, 1.0), _SERIES_FLOOR)
    r = jump_tail(p, hi - a, series_tol)
    l = jump_tail(p, b - lo, series_tol)
    right = TailBound(scale * r.value, scale * r.error, r.terms_used)
    left = TailBound(scale * l.value, scale * l.error, l.terms_used)
    value = head_sum + right.value + left.value
    error = right.error + left.error + 64 * _EPS * value
    split = VariationSplit(lo, hi, head_sum, right, left)
    return TailBound(value, error, hi - lo), split


def z_variation(f: LatticeFunction, p: float, tol: float = 1e-12, extra_head: int = 0) -> TailBound:
    """``Var_p(M f)`` on the integers with a rigorous error bound.

    The head between the two switchover points is summed exactly; both tails
    are scaled copies of the series behind ``C_p``. Tolerances below the
    floating-point floor of the series return the best attainable error.
    """
    p = float(p)
    inner = tol
    while True:
        power, _ = z_variation_power(f, p, inner, extra_head)
        v = power.value ** (1.0 / p)
        err = max((power.upper) ** (1.0 / p) - v, v - max(power.lower, 0.0) ** (1.0 / p))
        err = err * (1 + 4 * _EPS) + 4 * _EPS * v
        if err <= tol or inner < _SERIES_FLOOR:
            return TailBound(v, err, power.terms_used)
        inner /= 8.0


# -- reports --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    ratio: float
    error_bounds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
                "error_bounds": dict(self.error_bounds)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        return cls(float(data["lhs"]), float(data["rhs"]), float(data["ratio"]),
                   dict(data.get("error_bounds", {})))


def _p_norm(f: LatticeFunction, p: float) -> float:
    return float(np.sum(np.abs(f.values) ** p) ** (1.0 / p))


def check_var_norm_bound(f: LatticeFunction, p: float, tol: float = 1e-10) -> BoundReport:
    """Compare ``Var_p(M f)`` with ``C_p ||f||_p`` for ``1/2 < p <= 1``.

    Raises :class:`InvariantViolation` if the inequality fails beyond the
    combined numerical error.
    """
    lhs = z_variation(f, p, tol)
    cp = cp_constant(p, tol)
    norm = _p_norm(f, p)
    rhs = cp.value * norm
    rhs_err = cp.error * norm
    if lhs.lower > rhs + rhs_err:
        raise InvariantViolation(f"Var_p(Mf) = {lhs.value} exceeds C_p ||f||_p = {rhs} at p={p}")
    return BoundReport(lhs.value, rhs, lhs.value / rhs, {"lhs": lhs.error, "rhs": rhs_err})


def _sup_jump(values: np.ndarray) -> float:
    return float(np.max(np.abs(np.diff(values))))


def _lipschitz_window(f: LatticeFunction) -> range:
    # Outside the support either maximal function is a max of convex
    # decreasing functions of the distance, so its jumps shrink going
    # outwards; the largest one lies within two steps of the support.
    a, b = f.support
    return range(a - 2, b + 3)


def check_lipschitz_half(f: LatticeFunction) -> BoundReport:
    """``sup |(M~f)'|`` against ``sup |f'| / 2`` for the uncentered operator."""
    f._need_nonzero()
    lhs = _sup_jump(uncentered_maximal_z(f, _lipschitz_window(f)))
    rhs = 0.5 * float(np.max(np.abs(f.difference().values)))
    if lhs > rhs * (1 + 1e-12):
        raise InvariantViolation(f"uncentered Lipschitz bound fails: {lhs} > {rhs}")
    return BoundReport(lhs, rhs, lhs / rhs)


def centered_lipschitz_ratio(f: LatticeFunction) -> BoundReport:
    """``sup |(Mf)'|`` against ``sup |f'|`` for the centered operator."""
    f._need_nonzero()
    lhs = _sup_jump(centered_maximal_z(f, _lipschitz_window(f)))
    rhs = float(np.max(np.abs(f.difference().values)))
    return BoundReport(lhs, rhs, lhs / rhs)


# -- conjecture scan ------------------------------------------------------------------

@dataclass
class ConjectureReport:
    p: float
    max_ratio: float
    argmax: LatticeFunction
    argmax_kind: str
    conjectured_constant: float
    constant_error: float
    delta_ratio: float
    candidates: int
    violations: list = field(default_factory=list)
    delta_like: list = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "max_ratio": self.max_ratio,
            "argmax": self.argmax.to_dict(),
            "argmax_kind": self.argmax_kind,
            "conjectured_constant": self.conjectured_constant,
            "constant_error": self.constant_error,
            "delta_ratio": self.delta_ratio,
            "candidates": self.candidates,
            "violations": list(self.violations),
            "delta_like": list(self.delta_like),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def conjecture_candidates(cfg: SearchConfig, n_random: int = 1000,
                          max_support: int = 12) -> list[tuple[str, LatticeFunction]]:
    """Deltas, indicators, tents, then seeded random sparse functions.

    Random candidates have support length at most ``max_support``, values
    uniform in ``[0, 1]`` and each interior point zeroed with probability 1/2.
    """
    out: list[tuple[str, LatticeFunction]] = [("delta", delta()), ("delta", delta(3, 2.5))]
    out += [("indicator", indicator(0, k)) for k in range(2, max_support + 1)]
    out += [("tent", tent(h)) for h in range(2, 7)]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(n_random):
        length = int(rng.integers(1, max_support + 1))
        vals = rng.uniform(0.0, 1.0, length)
        if length > 2:
            vals[1:-1] *= rng.integers(0, 2, length - 2)
        vals[0] = vals[0] or 0.5
        vals[-1] = vals[-1] or 0.5
        out.append(("random", LatticeFunction(0, vals)))
    return out


def conjecture_scan(p: float, cfg: SearchConfig | None = None, n_random: int = 1000,
                    tol: float = 1e-12, kinds: tuple[str, ...] | None = None) -> ConjectureReport:
    """Largest observed ``Var_p(Mf) / Var_p(f)`` against ``C_p / 2^(1/p)``.

    A candidate above the constant by more than the numerical error is
    recorded in ``violations``; candidates within ``1e-9`` of it are listed
    in ``delta_like``. The scan is evidence only.
    """
    p = float(p)
    if not 0.5 < p <= 1:
        raise InvalidParameterError("the conjecture concerns p in (1/2, 1]")
    cfg = cfg or SearchConfig()
    const = conjectured_constant(p, tol)
    best, best_f, best_kind = -math.inf, None, ""
    delta_ratio = math.nan
    violations, matches = [], []
    cands = conjecture_candidates(cfg, n_random)
    if kinds is not None:
        cands = [c for c in cands if c[0] in kinds]
    for i, (kind, f) in enumerate(cands):
        num = z_variation(f, p, tol)
        den = lattice_variation(f, p)
        ratio = num.value / den
        err = num.error / den + 1e-14 * ratio
        if kind == "delta" and math.isnan(delta_ratio):
            delta_ratio = ratio
        if ratio > best:
            best, best_f, best_kind = ratio, f, kind
        if ratio - err > const.upper:
            violations.append({"index": i, "kind": kind, "ratio": ratio, "f": f.to_dict()})
        if abs(ratio - const.value) <= 1e-9:
            matches.append(i)
    return ConjectureReport(p, best, best_f, best_kind, const.value, const.error, delta_ratio,
                            len(cands), violations, matches)
