"""Frequency-grid construction, validation, and tail-corrected quadrature.

The integration checks compare against closed forms (Lorentzian -> pi/a) and
against scipy.integrate.quad evaluated in-test, so every expected number here
is either exact or derived on the spot.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from opentc import FrequencyGrid, GridError, TailDivergence, ValidationError
from opentc.grid import (DEFAULT_POINTS, check_decay, ensure_odd, fit_tail,
                         integrate, tail_models, trapezoid)


# ---------------------------------------------------------------- construction

def test_ensure_odd():
    assert ensure_odd(3) == 3
    assert ensure_odd(4) == 5
    assert ensure_odd(2**14) == 2**14 + 1
    with pytest.raises(ValidationError):
        ensure_odd(2)


def test_default_point_count_is_power_of_two_plus_one():
    assert DEFAULT_POINTS == 2**14 + 1
    assert DEFAULT_POINTS % 2 == 1


def test_symmetric_constructor():
    g = FrequencyGrid.symmetric(5.0, 11)
    assert g.n == 11
    assert g.half_width == pytest.approx(5.0)
    assert g.spacing == pytest.approx(1.0)
    assert g.points[0] == -g.points[-1]
    ### even requests are rounded up, never silently truncated
    assert FrequencyGrid.symmetric(5.0, 10).n == 11


def test_symmetric_rejects_nonpositive_width():
    with pytest.raises(ValidationError):
        FrequencyGrid.symmetric(0.0, 11)
    with pytest.raises(ValidationError):
        FrequencyGrid.symmetric(-1.0, 11)


def test_grid_validation():
    with pytest.raises(GridError):
        FrequencyGrid(np.linspace(-1, 1, 10))          # even count
    with pytest.raises(GridError):
        FrequencyGrid(np.array([-1.0, 0.1, 1.0]))      # non-uniform
    with pytest.raises(GridError):
        FrequencyGrid(np.linspace(0, 2, 11))           # not centred on zero
    with pytest.raises(GridError):
        FrequencyGrid(np.linspace(1, -1, 11))          # decreasing
    with pytest.raises(GridError):
        FrequencyGrid(np.array([0.0]))                 # too few points
    with pytest.raises(ValidationError):
        FrequencyGrid(np.linspace(-1, 1, 11), tail_policy="extrapolate")


def test_same_as_and_require_same():
    a = FrequencyGrid.symmetric(3.0, 101)
    b = FrequencyGrid.symmetric(3.0, 101)
    c = FrequencyGrid.symmetric(3.0, 103)
    d = FrequencyGrid.symmetric(4.0, 101)
    assert a.same_as(b)
    assert not a.same_as(c)
    assert not a.same_as(d)
    a.require_same(b)
    with pytest.raises(GridError):
        a.require_same(c)


# ----------------------------------------------------------------- quadrature

def test_trapezoid_matches_numpy():
    g = FrequencyGrid.symmetric(4.0, 257)
    f = np.exp(-g.points**2) * (1.0 + 0.5j * g.points)
    assert trapezoid(f, g) == pytest.approx(np.trapezoid(f, g.points), abs=1e-14)


def test_lorentzian_integral_closed_form():
    """int dnu / (nu^2 + a^2) = pi / a; tail correction must beat truncation
    by orders of magnitude on a grid whose span leaves ~2% of the mass out."""
    for a, W, n in [(1.0, 30.0, 2001), (0.7, 25.0, 1501)]:
        g = FrequencyGrid.symmetric(W, n)
        f = 1.0 / (g.points**2 + a * a)
        exact = np.pi / a
        truncated = abs(trapezoid(f, g).real - exact)
        corrected = abs(integrate(f, g).real - exact)
        assert truncated > 1e-2          # the cut mass really is significant
        assert corrected < 1e-6 * exact  # and the rational tails recover it


def test_truncate_policy_skips_correction():
    g = FrequencyGrid.symmetric(30.0, 1001, tail_policy="truncate")
    f = (1.0 + 0.0j) / (g.points**2 + 1.0)
    assert integrate(f, g) == trapezoid(f, g)


def test_integrate_zero_function():
    g = FrequencyGrid.symmetric(10.0, 101)
    assert integrate(np.zeros(g.n, complex), g) == 0.0


def test_integrate_shape_mismatch():
    g = FrequencyGrid.symmetric(10.0, 101)
    with pytest.raises(GridError):
        integrate(np.zeros(g.n - 2, complex), g)


def test_undecayed_integrand_rejected():
    g = FrequencyGrid.symmetric(10.0, 101)
    with pytest.raises(TailDivergence):
        check_decay(np.ones(g.n))
    with pytest.raises(TailDivergence):
        integrate(np.ones(g.n, complex), g)
    ### all-zero input is fine (no peak to compare against)
    check_decay(np.zeros(g.n))


def test_slow_tail_rejected():
    """A bare simple pole decays like 1/nu: finite trapezoid sum, divergent
    line integral.  The tail fit must refuse it rather than return a number."""
    g = FrequencyGrid.symmetric(40.0, 2001)
    f = 1.0 / (g.points - (2.0 - 0.5j))
    with pytest.raises(TailDivergence):
        integrate(f, g)


# ----------------------------------------------------------------- tail models

def test_pade_fit_recovers_exact_rational():
    A, B, C, D = 0.8 - 0.2j, 1.5 + 0.3j, 1.2, 30.0 + 2.0j
    nu = np.linspace(20, 40, 400)
    u = (A * nu + B) / (nu**2 + C * nu + D)
    m = fit_tail(nu, u, "right")
    assert m.kind == "pade"
    assert m.quality < 1e-12
    np.testing.assert_allclose(m(nu), u, atol=1e-12)
    ### residues of (A nu + B)/(quadratic) sum to the 1/nu coefficient A
    assert abs(m.linear_coeff - A) < 1e-12


def test_integral_beyond_matches_quadrature():
    B, C, D = 1.5 + 0.3j, 1.2, 30.0 + 2.0j
    nu = np.linspace(20, 40, 400)
    u = B / (nu**2 + C * nu + D)
    m = fit_tail(nu, u, "right", integrable=True)
    assert m.quality < 1e-12
    got = m.integral_beyond(40.0)
    want = (quad(lambda x: m(np.array([x]))[0].real, 40, np.inf)[0]
            + 1j * quad(lambda x: m(np.array([x]))[0].imag, 40, np.inf)[0])
    assert abs(got - want) < 1e-12


def test_integral_beyond_rejects_nondecaying_model():
    A, B, C, D = 0.8, 1.5, 1.2, 30.0
    nu = np.linspace(20, 40, 400)
    m = fit_tail(nu, (A * nu + B) / (nu**2 + C * nu + D), "right")
    with pytest.raises(TailDivergence):
        m.integral_beyond(40.0)


def test_fit_tail_degenerate_inputs():
    nu = np.linspace(20, 40, 400)
    assert fit_tail(nu, np.zeros_like(nu), "right").kind == "zero"
    assert fit_tail(nu[:5], 1.0 / nu[:5]**2, "right").kind == "zero"
    z = fit_tail(np.zeros(0), np.zeros(0), "left")
    assert z.kind == "zero"
    assert z(np.array([1.0, 2.0])).tolist() == [0.0, 0.0]
    assert z.linear_coeff == 0.0
    assert z.integral_beyond(10.0) == 0.0


def test_tail_models_split_sides():
    g = FrequencyGrid.symmetric(30.0, 1001)
    f = 1.0 / (g.points**2 + 1.0)
    left, right = tail_models(f, g, integrable=True)
    assert left.side == "left" and right.side == "right"
    assert left.quality < 1e-6 and right.quality < 1e-6
    ### symmetric input -> mirrored tail mass
    W = g.half_width
    assert abs(left.integral_beyond(W) - right.integral_beyond(W)) < 1e-10
