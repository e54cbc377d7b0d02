"""Gegenbauer (ultraspherical) polynomials and related scalar machinery.

The polynomial family G_n implemented here is the symmetric Jacobi family
orthogonal on [-1, 1] under the weight w(x) = (1 - x^2)^(alpha - 1/2),
standardized so that G_n(1) = 1 for every degree.  That standardization is
regular for all alpha > -1/2, including the Chebyshev case alpha = 0 where
the classical normalization factor is singular.

Everything in this module is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: double-precision machine epsilon, the default exact-hit tolerance
EPS_MACH = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class GegenbauerParam:
    """Family parameter alpha, restricted to the orthogonality range.

    Raises
    ------
    ValueError
        If alpha <= -1/2 or alpha is not finite.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a):
            raise ValueError(f"alpha must be finite, got {a!r}")
        if a <= -0.5:
            raise ValueError(f"alpha must exceed -1/2, got {a}")
        object.__setattr__(self, "alpha", a)


@dataclass(frozen=True)
class PolySpec:
    """A degree together with its family parameter."""

    degree: int
    param: GegenbauerParam

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))


@dataclass(frozen=True)
class NormAndLeading:
    """Weighted L2 norm squared and leading (x^n) coefficient of G_n."""

    norm: float
    leading: float


@dataclass(frozen=True)
class ErrorBoundInput:
    """Inputs of the finite-degree quadrature error bounds.

    ``derivative_bound`` is a uniform bound on the (degree+1)-th derivative
    of the integrand over [-1, 1].
    """

    degree: int
    param: GegenbauerParam
    x: float
    derivative_bound: float

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a non-negative integer")
        if not -1.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [-1, 1], got {self.x}")
        if self.derivative_bound < 0:
            raise ValueError("derivative bound must be non-negative")
        object.__setattr__(self, "degree", int(self.degree))


def _recurrence(n: int, alpha: float, x: np.ndarray) -> np.ndarray:
    """Evaluate G_n at ``x`` by the three-term recurrence.

    (k + 2a - 1) G_k = 2 (k + a - 1) x G_{k-1} - (k - 1) G_{k-2},
    started from G_0 = 1 and G_1 = x.  The k = 1 step is excluded on
    purpose: its leading factor vanishes at alpha = 0.
    """
    g0 = np.ones_like(x)
    if n == 0:
        return g0
    g1 = x.copy()
    for k in range(2, n + 1):
        g2 = (2.0 * (k + alpha - 1.0) * x * g1 - (k - 1.0) * g0) / (k + 2.0 * alpha - 1.0)
        g0, g1 = g1, g2
    return g1


def _recurrence_with_derivative(n: int, alpha: float, x: np.ndarray):
    """Evaluate (G_n, G_n') jointly; used by the Newton node polish."""
    g0 = np.ones_like(x)
    d0 = np.zeros_like(x)
    if n == 0:
        return g0, d0
    g1 = x.copy()
    d1 = np.ones_like(x)
    for k in range(2, n + 1):
        c1 = 2.0 * (k + alpha - 1.0) / (k + 2.0 * alpha - 1.0)
        c2 = (k - 1.0) / (k + 2.0 * alpha - 1.0)
        g2 = c1 * x * g1 - c2 * g0
        d2 = c1 * (x * d1 + g1) - c2 * d0
        g0, g1 = g1, g2
        d0, d1 = d1, d2
    return g1, d1


def _table(n: int, alpha: float, x: np.ndarray) -> np.ndarray:
    """Tabulate G_0 ... G_n at ``x``; shape (n+1, len(x))."""
    out = np.empty((n + 1, x.size))
    g0 = np.ones_like(x)
    out[0] = g0
    if n == 0:
        return out
    g1 = x.copy()
    out[1] = g1
    for k in range(2, n + 1):
        g2 = (2.0 * (k + alpha - 1.0) * x * g1 - (k - 1.0) * g0) / (k + 2.0 * alpha - 1.0)
        g0, g1 = g1, g2
        out[k] = g1
    return out


def gegenbauer_eval(spec: PolySpec, x):
    """Evaluate G_n(x) under the G_n(1) = 1 standardization.

    Parameters
    ----------
    spec : PolySpec
        Degree and family parameter.
    x : float or ndarray
        Evaluation point(s).  Values outside [-1, 1] are allowed.

    Returns
    -------
    float or ndarray
        G_n(x), odd in x for odd n and even for even n.
    """
    arr = np.asarray(x, dtype=float)
    val = _recurrence(spec.degree, spec.param.alpha, np.atleast_1d(arr))
    return float(val[0]) if arr.ndim == 0 else val.reshape(arr.shape)


def gegenbauer_norm_leading(spec: PolySpec) -> NormAndLeading:
    """Weighted norm squared and leading coefficient of G_n.

    The norm is integral of G_n(x)^2 (1-x^2)^(alpha-1/2) over [-1, 1] for
    the G_n(1) = 1 standardization, evaluated through log-gamma so the
    Chebyshev limit alpha = 0 is regular.
    """
    n = spec.degree
    a = spec.param.alpha
    if n == 0:
        log_norm = 2.0 * a * math.log(2.0) + 2.0 * math.lgamma(a + 0.5) - math.lgamma(2.0 * a + 1.0)
    else:
        log_norm = (
            (2.0 * a - 1.0) * math.log(2.0)
            + math.lgamma(n + 1.0)
            + 2.0 * math.lgamma(a + 0.5)
            - math.log(n + a)
            - math.lgamma(n + 2.0 * a)
        )
    leading = 1.0
    for j in range(2, n + 1):
        leading *= 2.0 * (j + a - 1.0) / (j + 2.0 * a - 1.0)
    return NormAndLeading(norm=math.exp(log_norm), leading=leading)


def integrate_gegenbauer(spec: PolySpec, x: float) -> float:
    """Definite integral of G_n from -1 to ``x``.

    Computed exactly (to rounding) by mapping a Legendre-Gauss rule onto
    [-1, x]; the rule has at least ceil((n+1)/2) + 1 points so the mapped
    degree-n integrand is inside its exactness range.
    """
    from .rules import lg_rule

    n = spec.degree
    rule = lg_rule((n + 1) // 2 + 1)
    mapped = 0.5 * ((x + 1.0) * rule.nodes + x - 1.0)
    vals = _recurrence(n, spec.param.alpha, mapped)
    return 0.5 * (x + 1.0) * float(rule.weights @ vals)


def _eta_scale(m: int, alpha: float) -> float:
    # 2^m / K_{m+1} reduced to a gamma ratio; all arguments positive
    log_scale = (
        math.lgamma(alpha + 1.0)
        + math.lgamma(m + 1.0 + 2.0 * alpha)
        - math.lgamma(2.0 * alpha + 1.0)
        - math.lgamma(m + 1.0 + alpha)
    )
    return log_scale


def eta(x_k: float, m: int, param: GegenbauerParam) -> float:
    """Quadrature error factor 2^m / K_{m+1} times integral of G_{m+1} over [-1, x_k].

    This is the scalar whose square the per-node parameter optimization
    minimizes.  Vanishes identically at x_k = -1.

    Raises
    ------
    OverflowError
        If the 2^m / K_{m+1} prefactor is not representable.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    log_scale = _eta_scale(m, param.alpha)
    if log_scale > 700.0:  # exp() overflow threshold for float64
        raise OverflowError(f"error-factor prefactor overflows for m={m}, alpha={param.alpha}")
    if x_k == -1.0:
        return 0.0
    return math.exp(log_scale) * integrate_gegenbauer(PolySpec(m + 1, param), x_k)


def discrete_gegenbauer_transform(rule, values) -> np.ndarray:
    """Modal coefficients of the interpolant through samples at Gauss nodes.

    Parameters
    ----------
    rule : QuadratureRule
        A Gegenbauer-Gauss rule with n+1 nodes (the Legendre kind is the
        alpha = 1/2 member of the family).
    values : array_like
        Function samples, one per node.

    Returns
    -------
    ndarray
        Coefficients c_0 ... c_n of the expansion in G_0 ... G_n, computed
        with the discrete inner product of the rule and the norms of
        :func:`gegenbauer_norm_leading`.
    """
    f = np.asarray(values, dtype=float)
    if f.shape != rule.nodes.shape:
        raise ValueError(f"expected {rule.nodes.size} samples, got {f.size}")
    n = rule.nodes.size - 1
    alpha = rule.alpha
    table = _table(n, alpha, rule.nodes)
    norms = np.array(
        [gegenbauer_norm_leading(PolySpec(j, GegenbauerParam(alpha))).norm for j in range(n + 1)]
    )
    return (table @ (rule.weights * f)) / norms


def error_bound(inp: ErrorBoundInput, asymptotic: bool = False, b_constant: float | None = None) -> float:
    """Upper bound on the quadrature truncation error over [-1, x].

    The finite-degree branches split on the sign of alpha and, for negative
    alpha, on the parity of the degree.  Binomial/gamma products are
    evaluated in log space with the sign-indefinite gamma factors cancelled
    analytically, so every branch is a product of positive terms.

    With ``asymptotic=True`` the large-degree envelope is returned instead;
    it contains an unspecified positive constant that the caller must
    supply as ``b_constant``.
    """
    n = inp.degree
    a = inp.param.alpha
    A = inp.derivative_bound
    width = inp.x + 1.0

    if asymptotic:
        if b_constant is None:
            raise ValueError("asymptotic bound requires the caller-supplied constant")
        if n < 1:
            raise ValueError("asymptotic bound needs degree >= 1")
        exponent = n * (1.0 - math.log(2.0)) - (n + 1.5) * math.log(n)
        if a >= 0.0:
            exponent += a * math.log(n)
        return b_constant * width * math.exp(exponent)

    if a >= 0.0:
        log_b = (
            -n * math.log(2.0)
            + math.lgamma(a + 1.0)
            + math.lgamma(n + 2.0 * a + 1.0)
            - math.lgamma(2.0 * a + 1.0)
            - math.lgamma(n + 2.0)
            - math.lgamma(n + a + 1.0)
        )
        return A * width * math.exp(log_b)
    if n % 2 == 1:
        log_b = (
            -(n + 1.0) * math.log(2.0)
            + math.lgamma((n + 1.0) / 2.0 + a)
            - math.lgamma(n + a + 1.0)
            - math.lgamma((n + 3.0) / 2.0)
        )
        return A * width * math.exp(log_b)
    log_b = (
        -n * math.log(2.0)
        + math.lgamma(n / 2.0 + a + 1.0)
        - math.lgamma(n + a + 1.0)
        - math.lgamma(n / 2.0 + 1.0)
        - 0.5 * math.log((n + 1.0) * (2.0 * a + n + 1.0))
    )
    return A * width * math.exp(log_b)
