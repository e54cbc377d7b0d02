"""Collocation solvers for two benchmark problems on [0, 1].

Problem 1 is a linear Fredholm integro-differential equation,

    y'(x) - y(x) - integral_0^1 e^(s x) y(s) ds = (1 - e^(x+1)) / (x+1),
    y(0) = 1,  exact solution y = e^x.

Problem 2 is a nonlinear boundary-value problem whose diffusion
coefficient depends on the integral of the unknown over the whole domain
(a nonlocal problem),

    -c * a(I[u]) * u''(x) + u(x)^5 = 0,   I[u] = integral_0^1 u,
    a(q) = 1/q,  c = 8 (sqrt(2) - 1) / 3,
    u(0) = 1,  u(1) = sqrt(2)/2,  exact solution u = 1 / sqrt(1 + x).

Both are integrated against the collocation nodes and assembled from the
integration matrices of :mod:`baryquad.gim` and :mod:`baryquad.optimal`,
mapped to [0, 1].
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .gim import build_gim_gg, map_to_unit, qth_order_gim, row_gim_endpoint
from .optimal import (OptimalConfig, build_optimal_gim, build_optimal_gim_symmetric,
                      map_to_unit_optimal)
from .polynomials import EPS_MACH, GegenbauerParam
from .rules import gg_rule

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class CollocationSolution:
    """Solution values at the collocation nodes plus error metrics.

    ``cd`` is the number of correct digits, -log10 of the maximum absolute
    error against the exact solution; ``kappa2`` is the 2-norm condition
    number of the assembled system (linear problems only).
    """

    nodes: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    exact: np.ndarray = field(repr=False)
    mae: float
    cd: float
    kappa2: float | None
    n: int
    m: int | None
    alpha: float

    def __post_init__(self):
        for name in ("nodes", "values", "exact"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def condition_number_2(matrix) -> float:
    """2-norm condition number sigma_max / sigma_min via full SVD.

    Returns +inf for a numerically singular matrix.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("condition number is defined here for square matrices")
    sigma = np.linalg.svd(a, compute_uv=False)
    if sigma[-1] == 0.0:
        return math.inf
    return float(sigma[0] / sigma[-1])


def newton_solve(residual, x0, tol: float = 1e-12, max_iter: int = 100,
                 jacobian=None) -> np.ndarray:
    """Damped Newton iteration with a finite-difference Jacobian.

    The step is halved (up to 30 times) while it fails to reduce the
    max-norm of the residual.  Convergence means the residual max-norm is
    at or below ``tol``.

    Raises
    ------
    ConvergenceError
        On a singular Jacobian or if ``max_iter`` iterations do not reach
        the tolerance.
    """
    x = np.array(x0, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("initial guess must be a non-empty vector")

    def fd_jacobian(xc, rc):
        jac = np.empty((rc.size, xc.size))
        for i in range(xc.size):
            h = math.sqrt(EPS_MACH) * max(1.0, abs(xc[i]))
            xp = xc.copy()
            xp[i] += h
            jac[:, i] = (residual(xp) - rc) / h
        return jac

    r = np.asarray(residual(x), dtype=float)
    if r.shape != x.shape:
        raise ValueError("residual dimension must match the unknown dimension")
    for _ in range(max_iter):
        rnorm = np.max(np.abs(r))
        if rnorm <= tol:
            return x
        jac = jacobian(x) if jacobian is not None else fd_jacobian(x, r)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian (residual max-norm {rnorm:.3e})") from exc
        lam = 1.0
        for _ in range(30):
            trial = x + lam * step
            r_trial = np.asarray(residual(trial), dtype=float)
            if np.max(np.abs(r_trial)) < rnorm:
                break
            lam *= 0.5
        x = x + lam * step
        r = np.asarray(residual(x), dtype=float)
    if np.max(np.abs(r)) <= tol:
        return x
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations (residual max-norm {np.max(np.abs(r)):.3e})")


def _unit_interval_operators(n: int, param: GegenbauerParam):
    """Collocation nodes on [0, 1] with first-order square matrix and endpoint row."""
    rule = gg_rule(n, param)
    nodes = 0.5 * (rule.nodes + 1.0)
    square = map_to_unit(build_gim_gg(n, param))
    endpoint = row_gim_endpoint(n, param) / 2.0
    return rule, nodes, square, endpoint


def solve_example1(n: int, m: int, param: GegenbauerParam,
                   config: OptimalConfig | None = None) -> CollocationSolution:
    """Solve the linear Fredholm integro-differential problem.

    The equation is integrated from 0 to each collocation node: the
    unknown's running integral uses the square matrix, the full-interval
    kernel integral uses the endpoint row, and the known source term is
    integrated with the per-row optimized rectangular matrix (``m``
    controls its expansion degree).  The resulting dense linear system is
    solved by LU with partial pivoting.
    """
    if config is None:
        config = OptimalConfig(m=m)
    elif config.m != m:
        raise ValueError("config.m must match the requested expansion degree")
    rule, s, square, endpoint = _unit_interval_operators(n, param)
    if m % 2 == 0:
        optimal = build_optimal_gim_symmetric(rule.nodes, config)
    else:
        optimal = build_optimal_gim(rule.nodes, config)
    optimal = map_to_unit_optimal(optimal)

    kernel = np.exp(np.outer(s, s))
    a = np.eye(n + 1) - square.entries - (square.entries @ kernel) * endpoint[None, :]

    def source(t):
        return (1.0 - np.exp(t + 1.0)) / (t + 1.0)

    b = 1.0 + (optimal.entries * source(optimal.adjoint_nodes)).sum(axis=1)
    values = np.linalg.solve(a, b)
    exact = np.exp(s)
    mae = float(np.max(np.abs(values - exact)))
    return CollocationSolution(nodes=s, values=values, exact=exact, mae=mae,
                               cd=-math.log10(mae) if mae > 0.0 else math.inf,
                               kappa2=condition_number_2(a), n=n, m=m, alpha=param.alpha)


def solve_example2(n: int, param: GegenbauerParam, tol: float = 1e-12,
                   max_iter: int = 100) -> CollocationSolution:
    """Solve the nonlinear nonlocal boundary-value problem.

    The twice-integrated equation is collocated at the interior Gauss
    nodes; both boundary values are built into the reformulation, which
    divides by the running-integral functional, so no explicit boundary
    equations appear.  The residual is driven to ``tol`` by damped Newton
    from the flat initial guess u = 1.
    """
    _, s, square, e1 = _unit_interval_operators(n, param)
    p2 = qth_order_gim(square, 2).entries
    e2 = (1.0 - s) * e1
    c_lin = 4.0 * (4.0 - 3.0 * _SQRT2)
    c_jump = 8.0 * (_SQRT2 - 1.0)

    def residual(u):
        u5 = u ** 5
        return p2 @ u5 - (e2 @ u5) * s + (c_lin * s - c_jump * (u - 1.0)) / (3.0 * (e1 @ u))

    values = newton_solve(residual, np.ones(n + 1), tol=tol, max_iter=max_iter)
    exact = 1.0 / np.sqrt(1.0 + s)
    mae = float(np.max(np.abs(values - exact)))
    return CollocationSolution(nodes=s, values=values, exact=exact, mae=mae,
                               cd=-math.log10(mae) if mae > 0.0 else math.inf,
                               kappa2=None, n=n, m=None, alpha=param.alpha)


def example2_residual(solution: CollocationSolution):
    """Assembled residual of the nonlinear problem at given nodal values.

    Rebuilds the operators of :func:`solve_example2` for the solution's
    parameters and returns a callable; useful for a-posteriori checks.
    """
    param = GegenbauerParam(solution.alpha)
    n = solution.n
    _, s, square, e1 = _unit_interval_operators(n, param)
    p2 = qth_order_gim(square, 2).entries
    e2 = (1.0 - s) * e1
    c_lin = 4.0 * (4.0 - 3.0 * _SQRT2)
    c_jump = 8.0 * (_SQRT2 - 1.0)

    def residual(u):
        u = np.asarray(u, dtype=float)
        u5 = u ** 5
        return p2 @ u5 - (e2 @ u5) * s + (c_lin * s - c_jump * (u - 1.0)) / (3.0 * (e1 @ u))

    return residual


def solution_to_csv(solution: CollocationSolution, path_or_file) -> None:
    """Metadata header then ``x,u_approx,u_exact,abs_error`` rows."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write("n,m,alpha,mae,cd,kappa2\n")
        m_s = "" if solution.m is None else str(solution.m)
        k_s = "" if solution.kappa2 is None else f"{solution.kappa2:.17g}"
        fh.write(f"{solution.n},{m_s},{solution.alpha:.17g},{solution.mae:.17g},"
                 f"{solution.cd:.17g},{k_s}\n")
        fh.write("x,u_approx,u_exact,abs_error\n")
        for x, u, ex in zip(solution.nodes, solution.values, solution.exact):
            fh.write(f"{x:.17g},{u:.17g},{ex:.17g},{abs(u - ex):.17g}\n")
    finally:
        if own:
            fh.close()


def solution_to_csv_string(solution: CollocationSolution) -> str:
    buf = io.StringIO()
    solution_to_csv(solution, buf)
    return buf.getvalue()
