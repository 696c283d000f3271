from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import sici

from diskhull import analytic
from diskhull.analytic import DomainError, Method
from diskhull.quadrature import QuadratureSpec

mpmath.mp.dps = 30

# frozen from the 30-digit mpmath evaluations below
E_M = 0.511655480125897
E_M2 = 0.362777264163803
SI_PI = 1.85193705198247
SI_HALF_PI = 1.37076216815449


def _mp_expected_m():
    return mpmath.pi * (mpmath.si(mpmath.pi) - mpmath.si(mpmath.pi / 2)) - 1


def _mp_expected_m2():
    return mpmath.quad(lambda t: (1 - 2 * t / (mpmath.pi / 2 + t)) * mpmath.sin(2 * t), [0, mpmath.pi / 2])


def test_frozen_constants_match_mpmath():
    assert float(_mp_expected_m()) == pytest.approx(E_M, abs=1e-14)
    assert float(_mp_expected_m2()) == pytest.approx(E_M2, abs=1e-14)
    assert float(mpmath.si(mpmath.pi)) == pytest.approx(SI_PI, abs=1e-14)
    # E[M^2] from its defining form 2 int a P(M >= a) da
    direct = 2 * mpmath.quad(
        lambda a: a * (1 - 2 * mpmath.asin(a) / (mpmath.pi - mpmath.acos(a))), [0, 0.5, 1]
    )
    assert float(direct) == pytest.approx(E_M2, abs=1e-12)


def test_expected_m_both_methods():
    q = analytic.expected_M(Method.QUADRATURE)
    s = analytic.expected_M(Method.SINE_INTEGRAL)
    assert abs(q - s) < 1e-12
    assert abs(s - E_M) < 1e-13
    assert abs(s - 0.511655) < 1e-4


def test_expected_m_by_mean_of_survival():
    # E[M] = int_0^1 P(M >= a) da, a third independent route
    val = float(mpmath.quad(lambda a: 1 - 2 * mpmath.asin(a) / (mpmath.pi - mpmath.acos(a)), [0, 1]))
    assert analytic.expected_M() == pytest.approx(val, abs=1e-12)


def test_expected_perimeter():
    p = analytic.expected_perimeter()
    assert p == pytest.approx(2 * math.pi * E_M, abs=1e-12)
    assert abs(p - (2 * math.pi**2 * (SI_PI - SI_HALF_PI) - 2 * math.pi)) < 1e-10
    assert abs(p - 3.214826) < 1e-4


def test_second_moment_and_bounds():
    assert analytic.expected_M_squared() == pytest.approx(E_M2, abs=1e-13)
    assert analytic.expected_M_squared_via_survival() == pytest.approx(E_M2, abs=1e-10)
    lo, hi = analytic.area_bounds()
    assert abs(lo - 0.474925) < 1e-4 and abs(hi - 1.139699) < 1e-4
    assert hi == pytest.approx(math.pi * E_M2, abs=1e-12)


def test_star_area_exact_and_by_quadrature():
    assert analytic.star_area_exact() == math.pi - 8.0 / 3.0
    assert f"{analytic.star_area_exact():.6f}" == "0.474926"
    assert f"{analytic.star_area_exact():.12g}" == "0.474925986923"
    assert analytic.star_area_quadrature() == pytest.approx(math.pi - 8 / 3, abs=1e-11)


def test_arctan_moment_identity():
    # int_0^1 a arctan(sqrt a) da = 1/3 is what turns the radial law into pi - 8/3
    assert float(mpmath.quad(lambda a: a * mpmath.atan(mpmath.sqrt(a)), [0, 1])) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.3, 1.0, math.pi / 2, math.pi, 3.99, 4.0, 4.01, 10.0, 40.0, 63.9, 64.1,
                               100.0, 1e3, 1e5])
def test_sine_integral_against_scipy(x):
    assert analytic.sine_integral(x) == pytest.approx(float(sici(x)[0]), abs=1e-14)


def test_sine_integral_frozen_values():
    assert analytic.sine_integral(math.pi) == pytest.approx(SI_PI, abs=1e-14)
    assert analytic.sine_integral(math.pi / 2) == pytest.approx(SI_HALF_PI, abs=1e-14)


@given(st.floats(-200.0, 200.0, allow_nan=False))
def test_sine_integral_is_odd(x):
    assert analytic.sine_integral(-x) == -analytic.sine_integral(x)


def test_cdf_special_points():
    assert analytic.cdf_M(0.0) == 0.0
    assert analytic.cdf_M(1.0) == 1.0
    assert analytic.cdf_M(0.5) == pytest.approx(0.5, abs=1e-15)
    assert analytic.survival_M(0.5) == pytest.approx(0.5, abs=1e-15)


def test_cdf_strictly_increasing_on_fine_grid():
    a = np.linspace(0.0, 1.0, 10_001)
    assert np.all(np.diff(analytic.cdf_M(a)) > 0)


def test_radial_survival_monotone_and_median():
    a = np.linspace(0.0, 1.0, 10_001)
    r = analytic.radial_survival(a)
    assert r[0] == 1.0 and r[-1] == 0.0
    assert np.all(np.diff(r) < 0)
    assert analytic.radial_survival(math.tan(math.pi / 8) ** 2) == pytest.approx(0.5, abs=1e-15)
    assert analytic.radial_survival(0.171573) == pytest.approx(0.5, abs=1e-6)


@given(st.floats(0.0, 1.0))
def test_cdf_and_survival_complement(a):
    assert analytic.cdf_M(a) + analytic.survival_M(a) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("bad", [-0.1, 1.0000001, float("nan")])
def test_domain_errors(bad):
    for fn in (analytic.cdf_M, analytic.survival_M, analytic.radial_survival):
        with pytest.raises(DomainError):
            fn(bad)


def test_vectorised_and_scalar_agree():
    a = np.array([0.1, 0.4, 0.9])
    np.testing.assert_array_equal(analytic.cdf_M(a), [analytic.cdf_M(float(x)) for x in a])
    assert isinstance(analytic.cdf_M(0.3), float)


def test_constants_are_cached_per_spec():
    spec = QuadratureSpec(abs_tol=1e-11)
    assert analytic.analytic_constants(spec) is analytic.analytic_constants(spec)
