"""Exact laws and expectations for Brownian motion killed on the unit circle.

``M`` is the largest x-coordinate reached before the exit time and ``r(0)``
the furthest point of the trace on the positive x-axis. Everything here is
either closed form or a one-dimensional quadrature of a smooth integrand.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from diskhull.quadrature import ConvergenceError, QuadratureSpec, integrate

__all__ = [
    "AnalyticConstants",
    "ConvergenceError",
    "DomainError",
    "Method",
    "QuadratureSpec",
    "analytic_constants",
    "area_bounds",
    "cdf_M",
    "expected_M",
    "expected_M_squared",
    "expected_M_squared_via_survival",
    "expected_perimeter",
    "radial_survival",
    "sine_integral",
    "star_area_exact",
    "star_area_quadrature",
    "survival_M",
]


class DomainError(ValueError):
    pass


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    SINE_INTEGRAL = "sine_integral"


def _unit_interval(a, name):
    arr = np.asarray(a, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} requires a in [0, 1], got {a!r}")
    return arr


def _out(arr):
    return float(arr) if arr.ndim == 0 else arr


def cdf_M(a):
    """P(M < a) = 2 arcsin(a) / (pi - arccos(a)); continuous on [0, 1]."""
    arr = _unit_interval(a, "cdf_M")
    return _out(2.0 * np.arcsin(arr) / (np.pi - np.arccos(arr)))


def survival_M(a):
    arr = _unit_interval(a, "survival_M")
    return _out(1.0 - 2.0 * np.arcsin(arr) / (np.pi - np.arccos(arr)))


def radial_survival(a):
    """P(r(0) >= a) = 1 - (4/pi) arctan(sqrt(a)), with value 0 at a = 1."""
    arr = _unit_interval(a, "radial_survival")
    val = 1.0 - (4.0 / np.pi) * np.arctan(np.sqrt(arr))
    val = np.where(arr == 1.0, 0.0, val)
    return _out(val)


# --- sine integral --------------------------------------------------------

_SERIES_LIMIT = 4.0
_ASYMPTOTIC_LIMIT = 64.0


def _si_series(x: float) -> float:
    x2 = x * x
    term = x  # x^(2n+1) / (2n+1)!
    total = x
    for n in range(1, 41):
        term *= -x2 / ((2 * n) * (2 * n + 1))
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) < 1e-16:
            break
    return total


def _si_asymptotic(x: float) -> float:
    # Si(x) = pi/2 - f(x) cos x - g(x) sin x; both series are stopped at
    # their smallest term.
    inv2 = 1.0 / (x * x)
    f_sum, term = 1.0, 1.0
    for k in range(1, 60):
        nxt = -term * (2 * k - 1) * (2 * k) * inv2
        if abs(nxt) >= abs(term):
            break
        term = nxt
        f_sum += term
    g_sum, term = 1.0, 1.0
    for k in range(1, 60):
        nxt = -term * (2 * k) * (2 * k + 1) * inv2
        if abs(nxt) >= abs(term):
            break
        term = nxt
        g_sum += term
    return math.pi / 2 - (f_sum / x) * math.cos(x) - (g_sum * inv2) * math.sin(x)


def _sinc_integrand(u):
    return np.sin(u) / u


def sine_integral(x: float, spec: QuadratureSpec | None = None) -> float:
    """Si(x) to about 1e-12 absolute accuracy.

    Series for |x| <= 4, adaptive quadrature of sin(u)/u up to |x| = 64 and
    the auxiliary-function asymptotics beyond.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("sine_integral requires a finite argument")
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        val = _si_series(ax)
    elif ax <= _ASYMPTOTIC_LIMIT:
        spec = spec or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-14, max_subdivisions=2000)
        tail, _ = integrate(_sinc_integrand, _SERIES_LIMIT, ax, spec, name="sin(u)/u")
        val = _si_series(_SERIES_LIMIT) + tail
    else:
        val = _si_asymptotic(ax)
    return math.copysign(val, x) if val != 0.0 else 0.0


# --- expectations ---------------------------------------------------------


def _mean_integrand(t):
    return (1.0 - 2.0 * t / (np.pi / 2 + t)) * np.cos(t)


def _second_moment_integrand(t):
    return (1.0 - 2.0 * t / (np.pi / 2 + t)) * np.sin(2.0 * t)


def expected_M(method: Method | str = Method.SINE_INTEGRAL, spec: QuadratureSpec | None = None) -> float:
    method = Method(method)
    spec = spec or QuadratureSpec()
    if method is Method.QUADRATURE:
        val, _ = integrate(_mean_integrand, 0.0, np.pi / 2, spec, name="E[M] integrand")
        return val
    return math.pi * (sine_integral(math.pi) - sine_integral(math.pi / 2)) - 1.0


def expected_perimeter(spec: QuadratureSpec | None = None) -> float:
    # Cauchy's formula plus rotational invariance: E[P] = 2 pi E[M].
    return 2.0 * math.pi * expected_M(Method.SINE_INTEGRAL, spec)


def expected_M_squared(spec: QuadratureSpec | None = None) -> float:
    val, _ = integrate(_second_moment_integrand, 0.0, np.pi / 2, spec or QuadratureSpec(),
                       name="E[M^2] integrand")
    return val


def expected_M_squared_via_survival(spec: QuadratureSpec | None = None) -> float:
    """2 * int_0^1 a P(M >= a) da, the untransformed form of E[M^2]."""
    val, _ = integrate(lambda a: 2.0 * a * survival_M(a), 0.0, 1.0, spec or QuadratureSpec(),
                       name="2 a P(M >= a)")
    return val


def area_bounds(spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """(lower, upper) bracket for the expected convex-hull area."""
    return star_area_exact(), math.pi * expected_M_squared(spec)


def star_area_exact() -> float:
    return math.pi - 8.0 / 3.0


def star_area_quadrature(spec: QuadratureSpec | None = None) -> float:
    """2 pi int_0^1 a P(r(0) >= a) da evaluated numerically."""
    spec = spec or QuadratureSpec()
    # sqrt(a) has unbounded derivative at 0; substitute a = s^2.
    val, _ = integrate(lambda s: 2.0 * s**3 * radial_survival(s * s), 0.0, 1.0, spec,
                       name="2 a P(r(0) >= a)")
    return 2.0 * math.pi * val


@dataclass(frozen=True)
class AnalyticConstants:
    expected_M: float
    expected_perimeter: float
    expected_M_squared: float
    area_lower_bound: float
    area_upper_bound: float
    star_area_exact: float


@functools.lru_cache(maxsize=None)
def analytic_constants(spec: QuadratureSpec = QuadratureSpec()) -> AnalyticConstants:
    """Computed once per quadrature spec; every consumer reads from here."""
    lower, upper = area_bounds(spec)
    return AnalyticConstants(
        expected_M=expected_M(Method.SINE_INTEGRAL, spec),
        expected_perimeter=expected_perimeter(spec),
        expected_M_squared=expected_M_squared(spec),
        area_lower_bound=lower,
        area_upper_bound=upper,
        star_area_exact=star_area_exact(),
    )
