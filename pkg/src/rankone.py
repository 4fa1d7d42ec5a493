"""Rank-one (BC_1) closed forms: Jacobi functions, F_{ell,lambda}, G_{ell,lambda} and the
Euler-type integral representations.

All forms assume m_l = 1, so a = m_s/2, rho(m) = a + 1 and the Jacobi parameter b(ell) = -ell.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from src import config
from src.errors import ClosedFormMismatch, ConfigError, StripViolation
from src.specfun import beta, gauss_2f1, integrate01

logger = logging.getLogger(__name__)

LOG2 = np.log(2.0)
INTEGRAL_FORMS = ('beta', 'tanh')


@dataclass(frozen=True)
class RankOneParams:
    a: float
    ell: float
    rho: float
    lam: complex
    x: float

    @property
    def b(self):
        return -self.ell

    @property
    def rho_ell(self):
        return self.rho - self.ell


def rank_one_params(m, ell, lam, x):
    if m.m_l != 1:
        raise ConfigError(f"Rank-one closed forms need m_l = 1, got m_l = {m.m_l}", m=m.as_tuple())
    a = m.m_s / 2
    lam = complex(np.ravel(np.asarray(lam, dtype=complex))[0])
    x = float(np.ravel(np.asarray(x, dtype=float))[0])
    return RankOneParams(a, float(ell), a + 1.0, lam, x)


def _cosh_power(x, power):
    return np.exp(power * np.log(np.cosh(x)))


def jacobi_phi(a, b, lam, x):
    """phi^{(a,b)}_{i lam}(x) = 2F1((a+b+1-lam)/2, (a+b+1+lam)/2; a+1; -sinh^2 x)."""
    lam = complex(lam)
    rho_ab = a + b + 1
    return gauss_2f1((rho_ab - lam) / 2, (rho_ab + lam) / 2, a + 1, -np.sinh(x) ** 2)


def f_ell_r1(m, ell, lam, x):
    """F_{ell,lambda}(m; x) = (cosh x)^{lam - rho} 2F1((rho-lam-ell)/2, (rho-lam+ell)/2; rho; tanh^2 x).

    The (cosh x)^{-ell} phi^{(a,-ell)} form is evaluated alongside and must agree.
    """
    par = rank_one_params(m, ell, lam, x)
    x = abs(par.x)
    rho, lam, ell = par.rho, par.lam, par.ell
    value = _cosh_power(x, lam - rho) * gauss_2f1((rho - lam - ell) / 2, (rho - lam + ell) / 2, rho,
                                                  np.tanh(x) ** 2)
    check = _cosh_power(x, -ell) * gauss_2f1((rho - ell + lam) / 2, (rho - ell - lam) / 2, par.a + 1,
                                             -np.sinh(x) ** 2)
    if abs(value - check) > config.CLOSED_FORM_TOL * max(1.0, abs(value)):
        raise ClosedFormMismatch("Rank-one closed forms disagree",
                                 tanh_form=value, sinh_form=check, x=x, lam=lam, ell=ell)
    return complex(value)


def g_ell_r1(m, ell, lam, x):
    """G_{ell,lambda}(m; x) = (cosh x)^{-ell} [phi^{(a,-ell)} + (a+1-ell+lam)/(4(a+1)) sinh(2x) phi^{(a+1,1-ell)}]."""
    par = rank_one_params(m, ell, lam, x)
    a, ell, lam, x = par.a, par.ell, par.lam, par.x
    coef = (a + 1 - ell + lam) / (4 * (a + 1))
    inner = jacobi_phi(a, -ell, lam, x) + coef * np.sinh(2 * x) * jacobi_phi(a + 1, 1 - ell, lam, x)
    return complex(_cosh_power(x, -ell) * inner)


def g_ell_difference_r1(m, ell, lam, x):
    """G_{-ell,lambda}(m; x) - G_{ell,lambda}(m; x).

    The even parts cancel since F_{ell} = F_{-ell}, leaving
    sinh(2x)/(4(a+1)) [(a+1+ell+lam) (cosh x)^{ell} phi^{(a+1,1+ell)} - (a+1-ell+lam) (cosh x)^{-ell} phi^{(a+1,1-ell)}].
    Near x = 0 this is ell x / (a+1).
    """
    par = rank_one_params(m, ell, lam, x)
    a, ell, lam, x = par.a, par.ell, par.lam, par.x
    plus = (a + 1 + ell + lam) * _cosh_power(x, ell) * jacobi_phi(a + 1, 1 + ell, lam, x)
    minus = (a + 1 - ell + lam) * _cosh_power(x, -ell) * jacobi_phi(a + 1, 1 - ell, lam, x)
    return complex(np.sinh(2 * x) / (4 * (a + 1)) * (plus - minus))


def euler_parameters(par):
    """(p, q, s) of the Euler integral for F_{ell,lambda}."""
    rho, lam, ell = par.rho, par.lam, par.ell
    return (rho + lam - ell) / 2, (rho - lam + ell) / 2, (rho - lam - ell) / 2


def f_ell_r1_integral(m, ell, lam, x, form='beta', rule=None):
    """F_{ell,lambda}(m; x) by quadrature of an Euler-type integral.

    form='beta': (cosh x)^{-ell} / B(p,q) int_0^1 u^{p-1} (1-u)^{q-1} (1 + u sinh^2 x)^{-s} du.
    form='tanh': the same after u = tanh^2 t, integrated over t in (0, inf).
    Requires Re p > 0 and Re q > 0. Returns a QuadResult-like (value, error) pair.
    """
    if form not in INTEGRAL_FORMS:
        raise ConfigError(f"Unknown integral form {form!r}", form=form, choices=list(INTEGRAL_FORMS))
    par = rank_one_params(m, ell, lam, x)
    p, q, s = euler_parameters(par)
    if p.real <= 0 or q.real <= 0:
        raise StripViolation(f"Euler integral needs Re p > 0 and Re q > 0, got p = {p}, q = {q}",
                             p=p, q=q, lam=par.lam, ell=par.ell)
    sh2 = np.sinh(par.x) ** 2
    if form == 'beta':
        def integrand(u, comp):
            return np.exp((p - 1) * np.log(u) + (q - 1) * np.log(comp) - s * np.log1p(u * sh2))
        scale = 1.0
    else:
        def integrand(u, comp):
            t = u / comp
            log_sinh = t + np.log(-np.expm1(-2 * t)) - LOG2
            log_cosh = t + np.log1p(np.exp(-2 * t)) - LOG2
            log_tanh2 = 2 * (log_sinh - log_cosh)
            expo = ((2 * p - 1) * log_sinh + (2 * s - 2 * p - 2 * q + 1) * log_cosh
                    - s * (2 * log_cosh + np.log1p(sh2 * np.exp(log_tanh2))) - 2 * np.log(comp))
            return np.exp(expo)
        scale = 2.0
    result = integrate01(integrand, rule=rule, pair=True)
    prefactor = scale * _cosh_power(par.x, -par.ell) / beta(p, q)
    logger.debug("Euler integral (%s form): p=%s q=%s s=%s", form, p, q, s)
    return complex(prefactor * result.value), float(abs(prefactor) * result.error)


def legendre_half_oracle(x):
    """P_{1/2}(cosh 2x) by its Laplace integral; equals jacobi_phi(0, 0, 2, x)."""
    z = np.cosh(2 * x)
    root = np.sqrt(z * z - 1)
    value, _ = integrate.quad(lambda theta: np.sqrt(z + root * np.cos(theta)), 0.0, np.pi,
                              epsabs=1e-14, epsrel=1e-13)
    return value / np.pi
