"""Central finite-difference versions of the Heckman-Opdam Laplacian and the Cherednik
operators, with their tau_{-ell} conjugates."""
import logging
from dataclasses import dataclass

import numpy as np

from src import config
from src.errors import ConfigError, SingularPoint
from src.multiplicity import deform
from src.rootsys import build_bc, mult_of, pairing, rho

logger = logging.getLogger(__name__)


SCHEMES = ('central', 'richardson')


@dataclass(frozen=True)
class FDConfig:
    """Step and scheme of the difference stencils. 'richardson' combines the central
    stencils at h and h/2 so the h^2 error term cancels."""
    h: float = config.FD_STEP
    scheme: str = 'richardson'

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"Unknown difference scheme {self.scheme!r}", scheme=self.scheme,
                              choices=list(SCHEMES))


def _setup(x, cfg):
    x = np.asarray(x, dtype=float)
    cfg = cfg or FDConfig()
    rs = build_bc(len(x))
    for root in rs.positive_roots:
        if abs(root(x)) < 2 * cfg.h:
            raise SingularPoint(f"alpha(x) is within 2h of zero for alpha = {root.label()}",
                                x=list(x), root=root.label(), h=cfg.h)
    return rs, x, cfg


def _extrapolated(stencil, h, scheme):
    if scheme == 'central':
        return stencil(h)
    return (4 * stencil(h / 2) - stencil(h)) / 3


def directional(f, x, xi, h, scheme='central'):
    return _extrapolated(lambda s: (f(x + s * xi) - f(x - s * xi)) / (2 * s), h, scheme)


def gradient(f, x, h, scheme='central'):
    grad = np.zeros(len(x), dtype=complex)
    for i in range(len(x)):
        step = np.zeros(len(x))
        step[i] = 1.0
        grad[i] = directional(f, x, step, h, scheme)
    return grad


def laplacian(f, x, h, center=None, scheme='central'):
    center = f(x) if center is None else center

    def stencil(s):
        total = 0.0 + 0.0j
        for i in range(len(x)):
            step = np.zeros(len(x))
            step[i] = s
            total += (f(x + step) - 2 * center + f(x - step)) / (s * s)
        return total

    return _extrapolated(stencil, h, scheme)


def apply_L(m, f, x, cfg=None):
    """L(m) f = Laplacian f + sum_alpha m_alpha coth(alpha(x)) <alpha, grad f>."""
    rs, x, cfg = _setup(x, cfg)
    grad = gradient(f, x, cfg.h, cfg.scheme)
    drift = 0.0 + 0.0j
    for root in rs.positive_roots:
        mult = mult_of(m, root)
        if mult == 0:
            continue
        drift += mult / np.tanh(root(x)) * pairing(root.vector, grad)
    return complex(laplacian(f, x, cfg.h, scheme=cfg.scheme) + drift)


def apply_L_ell(m, ell, f, x, cfg=None):
    """L_ell(m) = u^{-ell} (L(m(ell)) + <rho(m(ell)), rho(m(ell))>) u^ell - <rho(m), rho(m)>.

    Equals L(m) + (ell^2 + ell (1 - m_l)) sum_j cosh^{-2}(x_j); the second term vanishes for m_l = 1.
    """
    x = np.asarray(x, dtype=float)
    potential = (ell * ell + ell * (1 - m.m_l)) * float(np.sum(1.0 / np.cosh(x) ** 2))
    return apply_L(m, f, x, cfg) + potential * complex(f(x))


def apply_cherednik(m, xi, f, x, cfg=None, ell=0.0):
    """T_xi(m) f at x; with ell != 0 the conjugate u^{-ell} T_xi(m(ell)) u^ell.

    T_xi f = d_xi f - rho(xi) f + sum_alpha m_alpha alpha(xi) (f(x) - f(r_alpha x)) / (1 - e^{-2 alpha(x)}).
    """
    rs, x, cfg = _setup(x, cfg)
    xi = np.asarray(xi, dtype=float)
    mm = deform(m, ell) if ell else m
    fx = complex(f(x))
    deriv = directional(f, x, xi, cfg.h, cfg.scheme)
    out = deriv - pairing(rho(rs, mm), xi) * fx
    for root in rs.positive_roots:
        mult = mult_of(mm, root)
        if mult == 0:
            continue
        reflected = rs.reflection(root).apply(x)
        out += mult * root(xi) * (fx - f(reflected)) / (-np.expm1(-2 * root(x)))
    if ell:
        out += ell * float(np.dot(xi, np.tanh(x))) * fx
    return complex(out)


def laplace_residual(m, f, lam, x, cfg=None, ell=0.0):
    """Relative residual of (L_ell(m) + <rho, rho>) F = <lam, lam> F."""
    rs = build_bc(len(np.atleast_1d(x)))
    lam = np.asarray(lam, dtype=complex)
    fx = complex(f(np.asarray(x, dtype=float)))
    lhs = apply_L_ell(m, ell, f, x, cfg) if ell else apply_L(m, f, x, cfg)
    rho_m = rho(rs, m)
    eig = pairing(lam, lam)
    residual = lhs + pairing(rho_m, rho_m) * fx - eig * fx
    return float(abs(residual) / (abs(eig * fx) + 1.0))


def cherednik_residual(m, xi, f, lam, x, cfg=None, ell=0.0):
    """Relative residual of T_xi G = lam(xi) G."""
    lam = np.asarray(lam, dtype=complex)
    fx = complex(f(np.asarray(x, dtype=float)))
    eig = pairing(lam, np.asarray(xi, dtype=float))
    residual = apply_cherednik(m, xi, f, x, cfg, ell) - eig * fx
    return float(abs(residual) / (abs(eig * fx) + 1.0))
