import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import ConfigError, SingularPoint
from src.fdops import FDConfig, apply_cherednik, apply_L, cherednik_residual, laplace_residual
from src.multiplicity import Mult
from src.rankone import f_ell_r1, g_ell_r1


def one(y):
    return 1.0


def test_constants_are_annihilated(m211):
    assert abs(apply_L(m211, one, [0.5, 1.3])) < 1e-12
    assert abs(apply_L(m211, one, [0.8])) < 1e-12


def test_cherednik_on_constants(m211):
    assert_allclose(apply_cherednik(m211, [1.0, 0.0], one, [0.5, 1.3]), -2.0)
    assert_allclose(apply_cherednik(m211, [0.0, 1.0], one, [0.5, 1.3]), -3.0)


def test_plane_wave_rank_one():
    # m = 0: L is the plain second derivative
    m = Mult(0.0, 0.0, 0.0)
    value = apply_L(m, lambda y: np.exp(1.5 * y[0]), [0.4])
    assert_allclose(value, 2.25 * np.exp(0.6), rtol=1e-6)


def test_richardson_removes_step_error():
    m = Mult(0.0, 0.0, 0.0)

    def f(y):
        return np.exp(8.0 * y[0])

    exact = 64.0 * np.exp(3.2)
    central = apply_L(m, f, [0.4], FDConfig(scheme='central'))
    assert abs(central - exact) > 1e-6 * exact
    assert_allclose(apply_L(m, f, [0.4]), exact, rtol=1e-8)
    assert_allclose(apply_cherednik(m, [1.0], f, [0.4]), 8.0 * np.exp(3.2), rtol=1e-8)
    with pytest.raises(ConfigError):
        FDConfig(scheme='forward')


def test_singular_points(m211):
    with pytest.raises(SingularPoint):
        apply_L(m211, one, [0.5, 0.5])
    with pytest.raises(SingularPoint):
        apply_cherednik(m211, [1.0], one, [0.0])
    with pytest.raises(SingularPoint):
        apply_L(m211, one, [0.01], FDConfig(h=0.01))


@pytest.mark.parametrize('ell', [0.0, 0.5, -1.0, 2.0])
def test_conjugated_laplacian_rank_one(m211, ell):
    lam = 0.8 + 0.5j

    def f(y):
        return f_ell_r1(m211, ell, lam, y[0])

    assert laplace_residual(m211, f, [lam], [0.9], ell=ell) < 1e-5


@pytest.mark.parametrize('x', [0.6, -0.9])
def test_conjugated_cherednik_rank_one(m211, x):
    lam = 1.3 - 0.2j

    def g(y):
        return g_ell_r1(m211, 1.0, lam, y[0])

    assert cherednik_residual(m211, [1.0], g, [lam], [x], ell=1.0) < 1e-5


def test_untwisted_cherednik_rank_one(m211):
    lam = 2.4

    def g(y):
        return g_ell_r1(m211, 0.0, lam, y[0])

    assert cherednik_residual(m211, [1.0], g, [lam], [0.7]) < 1e-5
