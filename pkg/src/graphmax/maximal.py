"""Centered maximal operator on a finite graph, p-norms and p-variations.

Vertex functions are plain 1-D float arrays of length ``g.n``. The batched
helpers take an ``(m, n)`` array of functions and return one value per row;
they back the searches, which evaluate many candidates at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .graph import Graph

TIE_ATOL = 1e-12


@dataclass(frozen=True)
class MaximalProfile:
    values: np.ndarray
    best_radius: np.ndarray

    def to_dict(self) -> dict:
        return {"values": self.values.tolist(), "best_radius": self.best_radius.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MaximalProfile":
        return cls(np.asarray(data["values"], float), np.asarray(data["best_radius"], int))


def as_vertex_function(g: Graph, f) -> np.ndarray:
    arr = np.asarray(f, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != g.n:
        raise InvalidParameterError(f"function has shape {arr.shape}, graph has {g.n} vertices")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("function values must be finite")
    return arr


def vertex_function_to_json(f) -> str:
    return json.dumps({"values": np.asarray(f, float).tolist()})


def vertex_function_from_json(text: str) -> np.ndarray:
    return np.asarray(json.loads(text)["values"], dtype=float)


def _check_p(p: float) -> float:
    p = float(p)
    if not p > 0:
        raise InvalidParameterError(f"exponent p must be positive, got {p}")
    return p


def graph_maximal(g: Graph, f) -> MaximalProfile:
    """Exact ``M_G f`` with the smallest maximizing radius at each vertex."""
    a = np.abs(as_vertex_function(g, f))
    averages = g.averaging_operators @ a  # (radii, n)
    values = averages.max(axis=0)
    best_radius = np.argmax(averages >= values - TIE_ATOL, axis=0)
    return MaximalProfile(values, best_radius)


def maximal_batch(g: Graph, fs: np.ndarray) -> np.ndarray:
    """``M_G`` applied to each row of ``fs``; returns an array of the same shape."""
    a = np.abs(np.asarray(fs, dtype=float))
    return np.matmul(a, g.averaging_operators.transpose(0, 2, 1)).max(axis=0)


def p_norm(f, p: float) -> float:
    """``(sum |f|^p)^(1/p)``; a quasi-norm when ``p < 1``."""
    p = _check_p(p)
    return float(np.sum(np.abs(np.asarray(f, float)) ** p) ** (1.0 / p))


def p_variation(g: Graph, f, p: float) -> float:
    """``(sum over edges |f(u) - f(v)|^p)^(1/p)``."""
    p = _check_p(p)
    f = as_vertex_function(g, f)
    e = g.edge_array
    return float(np.sum(np.abs(f[e[:, 0]] - f[e[:, 1]]) ** p) ** (1.0 / p))


def p_variation_batch(g: Graph, fs: np.ndarray, p: float) -> np.ndarray:
    """p-th power of the p-variation of each row."""
    e = g.edge_array
    return np.sum(np.abs(fs[:, e[:, 0]] - fs[:, e[:, 1]]) ** p, axis=1)


def norm_ratio(g: Graph, f, p: float) -> float:
    """``||M_G f||_p / ||f||_p`` for a nonzero ``f``."""
    p = _check_p(p)
    f = as_vertex_function(g, f)
    den = p_norm(f, p)
    if den == 0:
        raise InvalidParameterError("norm ratio is undefined for the zero function")
    return p_norm(graph_maximal(g, f).values, p) / den


def variation_ratio(g: Graph, f, p: float) -> float:
    """``Var_p(M_G f) / Var_p(f)`` for a non-constant ``f``."""
    p = _check_p(p)
    f = as_vertex_function(g, f)
    den = p_variation(g, f, p)
    if den == 0:
        raise InvalidParameterError("variation ratio is undefined for constant functions")
    return p_variation(g, graph_maximal(g, f).values, p) / den


def norm_ratio_batch(g: Graph, fs: np.ndarray, p: float) -> np.ndarray:
    """Row-wise norm ratios; rows that are identically zero give ``-inf``."""
    fs = np.asarray(fs, float)
    num = np.sum(maximal_batch(g, fs) ** p, axis=1)
    den = np.sum(np.abs(fs) ** p, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (num / den) ** (1.0 / p)
    out[den == 0] = -np.inf
    return out


def variation_ratio_batch(g: Graph, fs: np.ndarray, p: float) -> np.ndarray:
    """Row-wise variation ratios; constant rows give ``-inf``."""
    fs = np.asarray(fs, float)
    num = p_variation_batch(g, maximal_batch(g, fs), p)
    den = p_variation_batch(g, fs, p)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (num / den) ** (1.0 / p)
    out[den == 0] = -np.inf
    return out
