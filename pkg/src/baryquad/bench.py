"""Quadrature benchmark helpers: test integrands and reference integrals."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import CollisionError
from .gim import apply_quadrature, build_basis_gim, build_gim_gg
from .polynomials import GegenbauerParam

#: named test integrands
INTEGRANDS = {
    "f1": lambda x: x ** 20,
    "f2": lambda x: np.exp(-x ** 2),
    "f3": lambda x: 1.0 / (1.0 + 25.0 * x ** 2),
}

_EXPR_NAMESPACE = {
    "exp": np.exp, "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "sqrt": np.sqrt, "log": np.log, "abs": np.abs,
    "pi": math.pi, "e": math.e,
}


def make_integrand(spec: str):
    """Resolve a named integrand or compile a one-variable expression in x."""
    if spec in INTEGRANDS:
        return INTEGRANDS[spec]
    code = compile(spec, "<integrand>", "eval")
    for name in code.co_names:
        if name not in _EXPR_NAMESPACE and name != "x":
            raise ValueError(f"unknown name {name!r} in integrand expression")

    def f(x):
        return eval(code, {"__builtins__": {}}, {**_EXPR_NAMESPACE, "x": x})

    float(f(0.25))  # fail fast on malformed expressions
    return f


@dataclass(frozen=True)
class BenchmarkSpec:
    """Grid of a quadrature benchmark run."""

    integrand: str
    n_grid: tuple
    alpha_grid: tuple

    def __post_init__(self):
        if not self.n_grid or not self.alpha_grid:
            raise ValueError("benchmark grids must be non-empty")
        if any(a <= -0.5 for a in self.alpha_grid):
            raise ValueError("alpha grid values must exceed -1/2")
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))


def reference_integrals(f, targets) -> np.ndarray:
    """Adaptive (Gauss-Kronrod) integrals of f over [-1, x_j], 1e-14 target.

    Independent of the package's own rules on purpose: this is the
    comparison oracle.
    """
    out = np.empty(len(targets))
    with warnings.catch_warnings():
        # the 1e-14 request sits at the roundoff floor for short intervals;
        # the returned value is still the best attainable
        warnings.simplefilter("ignore", IntegrationWarning)
        for j, xj in enumerate(targets):
            val, _ = quad(f, -1.0, float(xj), epsabs=1e-14, epsrel=1e-14, limit=500)
            out[j] = val
    return out


def run_benchmark(spec: BenchmarkSpec):
    """Per-node absolute errors of the barycentric and basis quadratures.

    Yields ``(n, alpha, node_index, err_bary, err_basis)`` tuples; grid
    points whose square matrix cannot be built (node collision) produce a
    single row with NaN errors and node index -1.
    """
    f = make_integrand(spec.integrand)
    for n in spec.n_grid:
        for alpha in spec.alpha_grid:
            param = GegenbauerParam(alpha)
            try:
                bary = build_gim_gg(n, param)
            except CollisionError:
                yield (n, alpha, -1, math.nan, math.nan)
                continue
            basis = build_basis_gim(n, param)
            samples = f(bary.source_nodes)
            ref = reference_integrals(f, bary.target_nodes)
            err_bary = np.abs(apply_quadrature(bary, samples) - ref)
            err_basis = np.abs(apply_quadrature(basis, samples) - ref)
            for j in range(len(ref)):
                yield (n, alpha, j, float(err_bary[j]), float(err_basis[j]))
