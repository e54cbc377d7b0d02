"""Barycentric Lagrange interpolation: weights and stable evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polynomials import EPS_MACH
from .rules import QuadratureRule


@dataclass(frozen=True, eq=False)
class BarycentricBasis:
    """Interpolation nodes with their barycentric weights.

    Rescaling all weights by one nonzero constant leaves the interpolant
    unchanged, so only the weight ratios matter.
    """

    nodes: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        xi = np.ascontiguousarray(self.xi, dtype=float)
        if nodes.ndim != 1 or nodes.shape != xi.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be 1-D arrays of equal nonzero length")
        if nodes.size > 1 and np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(xi == 0.0):
            raise ValueError("barycentric weights must be nonzero")
        if np.any(xi[:-1] * xi[1:] >= 0.0):
            raise ValueError("barycentric weights must alternate in sign along ascending nodes")
        nodes.flags.writeable = False
        xi.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "xi", xi)

    def __len__(self):
        return self.nodes.size


def bary_weights_direct(nodes) -> BarycentricBasis:
    """Weights from the defining product, xi_j = 1 / prod_{i != j} (x_j - x_i).

    Subject to cancellation for large node counts; prefer
    :func:`bary_weights_gg` on Gauss nodes.
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("nodes must be a non-empty 1-D array")
    if np.unique(x).size != x.size:
        raise ValueError("nodes must be pairwise distinct")
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    xi = 1.0 / diff.prod(axis=1)
    return BarycentricBasis(nodes=np.sort(x), xi=xi[np.argsort(x)])


def bary_weights_gg(rule: QuadratureRule) -> BarycentricBasis:
    """Cancellation-free weights for Gauss nodes.

    xi_i = (-1)^i sin(arccos(x_i)) sqrt(w_i); the sin-arccos form stays
    accurate where nodes cluster near the endpoints.
    """
    i = np.arange(rule.nodes.size)
    xi = (-1.0) ** i * np.sin(np.arccos(rule.nodes)) * np.sqrt(rule.weights)
    return BarycentricBasis(nodes=rule.nodes, xi=xi)


def bary_eval(basis: BarycentricBasis, values, x, exact_hit_tol: float = EPS_MACH):
    """Evaluate the interpolant through (nodes, values) at ``x``.

    Uses the second barycentric form, O(n) per point.  Points within
    ``exact_hit_tol`` of a node return that node's value directly, which
    keeps the cardinal property exact instead of dividing by ~0.
    """
    f = np.asarray(values, dtype=float)
    if f.shape != basis.nodes.shape:
        raise ValueError(f"expected {basis.nodes.size} values, got {f.size}")
    pts = np.asarray(x, dtype=float)
    scalar = pts.ndim == 0
    pts = np.atleast_1d(pts)
    diff = pts[:, None] - basis.nodes[None, :]
    hit_rows, hit_cols = np.nonzero(np.abs(diff) <= exact_hit_tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = basis.xi[None, :] / diff
        out = (mu @ f) / mu.sum(axis=1)
    out[hit_rows] = f[hit_cols]
    return float(out[0]) if scalar else out


def lagrange_matrix(basis: BarycentricBasis, points, exact_hit_tol: float = EPS_MACH,
                    on_hit: str = "raise"):
    """Cardinal-function table L[k, i] = L_i(points[k]).

    ``on_hit`` selects the treatment of points within ``exact_hit_tol`` of
    a node: "raise" reports the collision as (node index, point index),
    "cardinal" replaces the affected row by the exact unit row that the
    cardinal property dictates.
    """
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None] - basis.nodes[None, :]
    hits = np.abs(diff) <= exact_hit_tol
    any_hits = hits.any()
    if any_hits and on_hit == "raise":
        k, i = np.argwhere(hits)[0]
        raise _HitDetected(int(i), int(k))
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = basis.xi[None, :] / diff
        table = mu / mu.sum(axis=1, keepdims=True)
    if any_hits:
        rows = hits.any(axis=1)
        table[rows] = 0.0
        k, i = np.nonzero(hits)
        table[k, i] = 1.0
    return table


class _HitDetected(Exception):
    """Internal signal: collision at (node index i, point index k)."""

    def __init__(self, i: int, k: int):
        self.i = i
        self.k = k
        super().__init__((i, k))
