"""Scalar special functions: log-gamma, Euler beta, Gauss 2F1, the t/(1-e^{-t})
kernel and tanh-sinh quadrature on (0, 1)."""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from src import config
from src.errors import (ConfigError, NonConvergent, NonIntegrableEndpoint,
                        ParameterPole, PoleAtNonpositiveInteger)

logger = logging.getLogger(__name__)

MAX_KERNEL_ORDER = 60


# --- Gamma and beta ---
def near_pole(z, tol=config.POLE_TOL):
    """True when z is within tol of a nonpositive integer."""
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def log_gamma(z):
    """Principal branch of log Gamma(z)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z.real:g}", z=z)
    return complex(special.loggamma(z))


def gamma(z):
    return np.exp(log_gamma(z))


def log_beta(x, y):
    return log_gamma(x) + log_gamma(y) - log_gamma(complex(x) + complex(y))


def beta(x, y):
    """B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)."""
    return np.exp(log_beta(x, y))


# --- Gauss hypergeometric function ---
def gauss_2f1(a, b, c, z, tol=config.SERIES_TOL, max_terms=config.SERIES_MAX_TERMS):
    """2F1(a, b; c; z) for real z <= 0 or |z| < 1.

    Real negative z is first mapped to w = z/(z-1) in [0, 1) by
    2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if (c.imag == 0 and c.real <= 0 and c.real == round(c.real)):
        raise ParameterPole(f"2F1 is undefined for c = {c}", c=c)
    if z == 0:
        return 1.0 + 0.0j
    if z.imag == 0 and z.real < 0:
        w = z.real / (z.real - 1.0)
        prefactor = np.exp(-a * np.log(1.0 - z.real))
        return prefactor * _series_2f1(a, c - b, c, w, tol, max_terms)
    if abs(z) >= 1:
        raise NonConvergent(f"2F1 series does not converge at z = {z}", z=z)
    return _series_2f1(a, b, c, z, tol, max_terms)


def _series_2f1(a, b, c, w, tol, max_terms):
    if w == 0:
        return 1.0 + 0.0j
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * w
        total += term
        if term == 0:
            return total
        if abs(term) < tol * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise NonConvergent(f"2F1 series did not converge in {max_terms} terms at w = {w}",
                        w=w, terms=max_terms)


# --- Bernoulli-type kernel ---
def bern_kernel_coeffs(order):
    """Taylor coefficients of t/(1 - e^{-t}) at 0 up to t^order: (-1)^n B_n / n!."""
    if order < 0 or order > MAX_KERNEL_ORDER:
        raise ConfigError(f"Kernel order must be in [0, {MAX_KERNEL_ORDER}], got {order}", order=order)
    return list(_kernel_coeffs(int(order)))


@lru_cache(maxsize=None)
def _kernel_coeffs(order):
    bern = special.bernoulli(order)
    fact = special.factorial(np.arange(order + 1), exact=False)
    signs = (-1.0) ** np.arange(order + 1)
    return tuple(float(v) for v in signs * bern[:order + 1] / fact)


# --- Tanh-sinh quadrature on (0, 1) ---
@dataclass(frozen=True)
class QuadratureRule:
    """Double-exponential rule on (0, 1) with step h = 2^-level.

    Nodes are u = 1/(1 + exp(-pi sinh t)); complements holds 1 - u computed
    without cancellation so that integrands singular at u = 1 stay accurate.
    """
    level: int
    nodes: np.ndarray
    complements: np.ndarray
    weights: np.ndarray
    # indices of the nodes belonging to the previous level
    coarse: np.ndarray


T_MAX = float(np.arcsinh(700.0 / np.pi))


@lru_cache(maxsize=16)
def tanh_sinh_rule(level=config.QUAD_LEVEL):
    if level < 1:
        raise ConfigError("Quadrature level must be >= 1", level=level)
    h = 2.0 ** -level
    k_max = int(np.floor(T_MAX / h))
    k = np.arange(-k_max, k_max + 1)
    t = k * h
    s = np.pi * np.sinh(t)
    nodes = special.expit(s)
    complements = special.expit(-s)
    weights = h * np.pi * np.cosh(t) * nodes * complements
    keep = (nodes > 0) & (complements > 0) & (weights > 0)
    coarse = np.flatnonzero((k[keep] % 2) == 0)
    return QuadratureRule(level, nodes[keep], complements[keep], weights[keep], coarse)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float


def integrate01(f, rule=None, pair=False):
    """Integrates f over (0, 1).

    f receives the node array u (and 1-u when pair is set) and must return an
    array of the same shape. The error is the difference to the previous level.
    """
    rule = rule or tanh_sinh_rule()
    with np.errstate(over='ignore', under='ignore', invalid='ignore', divide='ignore'):
        values = f(rule.nodes, rule.complements) if pair else f(rule.nodes)
    values = np.broadcast_to(np.asarray(values), rule.nodes.shape)
    if not np.all(np.isfinite(values)):
        raise NonIntegrableEndpoint("Integrand is not finite at some quadrature node",
                                    level=rule.level)
    contrib = rule.weights * values
    fine = contrib.sum()
    coarse = 2.0 * contrib[rule.coarse].sum()
    scale = max(abs(fine), 1e-300)
    tail = max(abs(contrib[0]), abs(contrib[-1]))
    if tail > 1e-8 * scale:
        raise NonIntegrableEndpoint("Integrand does not decay at the endpoints",
                                    tail=float(tail), value=complex(fine))
    error = abs(fine - coarse)
    if error > 1e-3 * scale and error > 1e-12:
        raise NonIntegrableEndpoint("Quadrature levels disagree; endpoint singularity too strong",
                                    error=float(error), value=complex(fine))
    value = complex(fine) if np.iscomplexobj(fine) else float(fine)
    return QuadResult(value, float(error))
