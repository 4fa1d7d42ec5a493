import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import ConfigError, StripViolation
from src.multiplicity import Mult
from src.rankone import (f_ell_r1, f_ell_r1_integral, g_ell_difference_r1, g_ell_r1, jacobi_phi,
                         legendre_half_oracle)
from src.taufun import TauRequest, g_ell


def test_degenerate_parameters_reduce_to_cosh_power(m211):
    assert_allclose(f_ell_r1(m211, 1.0, 1.0, 1.0), 1 / np.cosh(1.0), rtol=1e-14)
    assert_allclose(f_ell_r1(m211, 1.0, 1.0, 1.0).real, 0.6480542736638855, rtol=1e-13)


def test_value_at_rho_is_one(m211):
    for x in (0.0, 0.7, 3.0):
        assert_allclose(f_ell_r1(m211, 0.0, 2.0, x), 1.0, rtol=1e-13)


@pytest.mark.parametrize('ell', [0.3, 0.7, 1.0])
@pytest.mark.parametrize('lam', [0.6, 1.5 + 0.4j])
def test_symmetric_in_ell(m211, ell, lam):
    for x in (0.4, 1.8):
        assert_allclose(f_ell_r1(m211, ell, lam, x), f_ell_r1(m211, -ell, lam, x), rtol=1e-12)


def test_even_in_x(m211):
    assert_allclose(f_ell_r1(m211, 0.5, 0.8, -1.3), f_ell_r1(m211, 0.5, 0.8, 1.3), rtol=1e-15)


@pytest.mark.parametrize('ell', [-1.0, 0.0, 0.5, 2.0])
@pytest.mark.parametrize('lam', [0.0, 1.5, 3.0])
def test_positive_for_real_lambda(m211, ell, lam):
    for x in (0.3, 1.0, 2.5):
        value = f_ell_r1(m211, ell, lam, x)
        assert value.real > 0
        assert abs(value.imag) < 1e-14


def test_g_at_origin(m211):
    assert_allclose(g_ell_r1(m211, 0.5, 1.7 + 0.2j, 0.0), 1.0, rtol=1e-15)


def test_g_linear_term(m211):
    h = 1e-5
    slope = (g_ell_r1(m211, 0.0, 3.0, h) - g_ell_r1(m211, 0.0, 3.0, -h)) / (2 * h)
    assert_allclose(slope, 1.25, rtol=1e-8)


def test_g_even_part_is_f(m211):
    lam, ell, x = 0.9 + 0.3j, 0.5, 0.8
    even = (g_ell_r1(m211, ell, lam, x) + g_ell_r1(m211, ell, lam, -x)) / 2
    assert_allclose(even, f_ell_r1(m211, ell, lam, x), rtol=1e-11)


@pytest.mark.parametrize('ell', [0.4, 1.0])
@pytest.mark.parametrize('x', [0.5, 1.5])
def test_difference_identity(m211, ell, x):
    lam = 1.1 - 0.3j
    diff = g_ell_r1(m211, -ell, lam, x) - g_ell_r1(m211, ell, lam, x)
    assert_allclose(g_ell_difference_r1(m211, ell, lam, x), diff, rtol=1e-10)


@pytest.mark.parametrize('ell, lam', [(0.5, 1.1 - 0.3j), (0.25, 0.7)])
@pytest.mark.parametrize('x', [0.4, 0.6])
def test_difference_matches_taylor_engine(m211, ell, lam, x):
    req = TauRequest(m211, ell, (lam,), method='taylor')
    expected = g_ell(req.replace(ell=-ell), [x]).value - g_ell(req, [x]).value
    assert_allclose(g_ell_difference_r1(m211, ell, lam, x), expected, rtol=1e-7)


def test_difference_near_origin(m211):
    x = 1e-6
    assert_allclose(g_ell_difference_r1(m211, 0.5, 0.9, x), 0.5 * x / 2.0, rtol=1e-6)


@pytest.mark.parametrize('form', ['beta', 'tanh'])
def test_integral_forms_match_closed_form(m211, form):
    value, error = f_ell_r1_integral(m211, 1.0, 0.5, 1.0, form=form)
    assert_allclose(value, f_ell_r1(m211, 1.0, 0.5, 1.0), rtol=1e-9)
    assert error < 1e-8


def test_integral_complex_lambda(m211):
    lam = 0.4 + 0.9j
    value, _ = f_ell_r1_integral(m211, 0.5, lam, 0.7)
    assert_allclose(value, f_ell_r1(m211, 0.5, lam, 0.7), rtol=1e-9)


def test_integral_outside_strip(m211):
    with pytest.raises(StripViolation):
        f_ell_r1_integral(m211, 0.0, 3.0, 1.0)


def test_integral_unknown_form(m211):
    with pytest.raises(ConfigError):
        f_ell_r1_integral(m211, 0.0, 0.5, 1.0, form='simpson')


def test_needs_unit_long_multiplicity():
    with pytest.raises(ConfigError):
        f_ell_r1(Mult(2.0, 1.0, 0.0), 0.0, 1.0, 1.0)


@pytest.mark.parametrize('x', [0.25, 1.0, 2.0])
def test_legendre_oracle(x):
    assert_allclose(jacobi_phi(0, 0, 2, x).real, legendre_half_oracle(x), rtol=1e-11)
