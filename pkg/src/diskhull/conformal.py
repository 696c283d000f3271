"""Conformal maps used to compute harmonic measure of chords and slits.

The truncated disk ``D_a = {|z| < 1, Re z < a}`` is sent to a wedge by a
linear fractional map, the wedge is opened onto the upper half-plane by a
power map, and the exit law through the chord becomes the half-plane
harmonic measure of ``[0, inf)``. None of this goes through the closed form
in :mod:`diskhull.analytic`; the two are compared in the tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from diskhull.analytic import DomainError
from diskhull.quadrature import QuadratureSpec, integrate

_ANGLE_TOL = 1e-12


class PointAtInfinity:
    """The point at infinity of the Riemann sphere (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (PointAtInfinity, ())


INFINITY = PointAtInfinity()


@dataclass(frozen=True)
class TruncatedDiskMap:
    """Chord map and power map for the truncated disk with chord Re z = a."""

    a: float
    b: float = field(init=False)
    z_plus: complex = field(init=False)
    z_minus: complex = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise DomainError(f"chord abscissa must lie in (0, 1), got {self.a!r}")
        b = math.sqrt(1.0 - self.a * self.a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z_plus", complex(self.a, b))
        object.__setattr__(self, "z_minus", complex(self.a, -b))
        # opening angle of the image wedge
        object.__setattr__(self, "beta", math.pi - math.acos(self.a))


def chord_map(m: TruncatedDiskMap, z):
    """(z - z_minus) / (z_plus - z); sends z_plus to INFINITY."""
    if z is INFINITY:
        return complex(-1.0, 0.0)
    z = complex(z)
    den = m.z_plus - z
    if den == 0:
        return INFINITY
    return (z - m.z_minus) / den


def chord_map_on_chord(m: TruncatedDiskMap, y: float) -> float:
    """Image of the chord point a + iy, a positive real."""
    if not abs(y) < m.b:
        raise DomainError(f"chord parameter must satisfy |y| < {m.b!r}, got {y!r}")
    return (y + m.b) / (m.b - y)


def wedge_to_halfplane(m: TruncatedDiskMap, w):
    """w -> w**(pi / beta) with the argument taken in [0, beta]."""
    if w is INFINITY:
        return INFINITY
    w = complex(w)
    if w == 0:
        return 0j
    arg = math.atan2(w.imag, w.real)
    if arg < 0.0:
        arg += 2.0 * math.pi
    if arg > 2.0 * math.pi - _ANGLE_TOL:
        arg = 0.0
    if arg > m.beta + _ANGLE_TOL:
        raise DomainError(f"{w!r} lies outside the wedge 0 <= arg <= {m.beta!r}")
    arg = min(arg, m.beta)
    scale = math.pi / m.beta
    return cmath.rect(abs(w) ** scale, arg * scale)


def full_map(m: TruncatedDiskMap, z):
    return wedge_to_halfplane(m, chord_map(m, z))


def full_map_of_origin(m: TruncatedDiskMap) -> complex:
    """Image of the Brownian starting point under the composite map."""
    return full_map(m, 0j)


def origin_image_closed_form(a: float) -> complex:
    """exp(i * 2 pi arcsin(a) / (pi - arccos(a)))."""
    return cmath.exp(1j * 2.0 * math.pi * math.asin(a) / (math.pi - math.acos(a)))


def half_plane_positive_ray_measure(z) -> float:
    """Harmonic measure of [0, inf) seen from z in the upper half-plane."""
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError(f"point must lie in the open upper half-plane, got {z!r}")
    return 1.0 - math.atan2(z.imag, z.real) / math.pi


def poisson_kernel_positive_ray_quadrature(
    z, spec: QuadratureSpec | None = None, cutoff: float = 1e6
) -> float:
    """Numerically integrate the half-plane Poisson kernel over [0, inf).

    The kernel is integrated on [0, cutoff]; the remainder uses the leading
    tail term y / (pi (cutoff - x)).
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError(f"point must lie in the open upper half-plane, got {z!r}")
    x, y = z.real, z.imag
    if cutoff <= max(x, 0.0) + 10 * y:
        raise ValueError("cutoff too small for the requested point")
    spec = spec or QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=4000)

    def kernel(xi):
        return y / ((x - xi) ** 2 + y * y) / math.pi

    # breakpoints at the peak and on a log scale, so no sub-interval is
    # much wider than its distance to the peak
    points = [10.0**k for k in range(-3, int(math.log10(cutoff)) + 1)]
    if x > 0.0:
        points += [x, max(x - y, 0.0), x + y]
    body, _ = integrate(kernel, 0.0, cutoff, spec, points=points, name="half-plane Poisson kernel")
    return body + y / (math.pi * (cutoff - x))


def survival_via_conformal(a: float) -> float:
    """P(M >= a) as the harmonic measure of the chord of D_a seen from 0."""
    m = TruncatedDiskMap(a)
    return half_plane_positive_ray_measure(full_map_of_origin(m))


def slit_disk_mobius(a: float, z):
    """Disk automorphism (z - a) / (1 - a z) taking the slit [a, 1) to [0, 1)."""
    if not 0.0 <= a < 1.0:
        raise DomainError(f"slit start must lie in [0, 1), got {a!r}")
    if z is INFINITY:
        return INFINITY if a == 0.0 else complex(-1.0 / a)
    z = complex(z)
    den = 1.0 - a * z
    if den == 0:
        return INFINITY
    return (z - a) / den


def reflect(z):
    return INFINITY if z is INFINITY else -complex(z)


def survival_grid_discrepancy(grid=None) -> float:
    """Largest |survival_via_conformal - (1 - cdf_M)| over a grid in (0, 1)."""
    from diskhull.analytic import cdf_M

    if grid is None:
        grid = np.arange(1, 100) / 100.0
    return max(abs(survival_via_conformal(float(a)) - (1.0 - cdf_M(float(a)))) for a in grid)
