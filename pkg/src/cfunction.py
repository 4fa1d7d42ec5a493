"""Harish-Chandra c-function c(m; lambda) = c~(m; lambda) / c~(m; rho(m)) and the
regularity test for the leading coefficient b_0."""
import logging
from dataclasses import dataclass, field

import numpy as np

from src import config
from src.errors import CFunctionPole
from src.rootsys import coroot_value, rho
from src.specfun import log_gamma, near_pole

logger = logging.getLogger(__name__)

LOG2 = np.log(2.0)


@dataclass(frozen=True)
class CValue:
    value: complex
    log_parts: dict = field(default_factory=dict)
    # roots whose factor vanishes (more denominator than numerator poles)
    zero_roots: tuple = ()

    @property
    def is_zero(self):
        return bool(self.zero_roots)


def _partner_mult(m, root):
    if root.kind == 'short':
        return m.m_s, m.m_l
    return m.m_m, 0.0


def _root_factor(lam_a, m_a, m_2a):
    """Log of 2^{-l} Gamma(l) / (Gamma(l/2 + m_a/4 + 1/2) Gamma(l/2 + m_a/4 + m_2a/2)).

    Returns (log value, numerator poles, denominator poles).
    """
    num = [lam_a]
    den = [lam_a / 2 + m_a / 4 + 0.5, lam_a / 2 + m_a / 4 + m_2a / 2]
    num_poles = sum(1 for z in num if near_pole(z))
    den_poles = sum(1 for z in den if near_pole(z))
    if num_poles or den_poles:
        return None, num_poles, den_poles
    log_val = -lam_a * LOG2 + sum(log_gamma(z) for z in num) - sum(log_gamma(z) for z in den)
    return log_val, 0, 0


def c_tilde(rs, m, lam):
    """Product over the indivisible positive roots (short with partner 2 alpha, medium).

    Poles are counted over the whole product: more denominator than numerator poles
    make c~ vanish, more numerator poles make it infinite.
    """
    lam = np.asarray(lam, dtype=complex)
    log_parts = {}
    singular = []
    total = 0.0 + 0.0j
    num_total = den_total = 0
    for root in rs.indivisible_roots:
        m_a, m_2a = _partner_mult(m, root)
        lam_a = complex(coroot_value(lam, root))
        log_val, num_poles, den_poles = _root_factor(lam_a, m_a, m_2a)
        if log_val is not None:
            log_parts[root.label()] = log_val
            total += log_val
            continue
        num_total += num_poles
        den_total += den_poles
        singular.append((root.label(), num_poles, den_poles))
    if not singular:
        return CValue(complex(np.exp(total)), log_parts, ())
    labels = [label for label, _, _ in singular]
    if num_total > den_total:
        raise CFunctionPole(f"Numerator pole of c~ at roots {', '.join(labels)}",
                            root=labels[0], roots=labels, kind='numerator', lam=lam)
    if num_total == den_total:
        raise CFunctionPole(f"Indeterminate c~ (cancelling poles) at roots {', '.join(labels)}",
                            root=labels[0], roots=labels, kind='indeterminate', lam=lam)
    zero_roots = [label for label, num, den in singular if den > num] or labels
    for label in labels:
        log_parts[label] = complex(-np.inf)
    return CValue(0.0 + 0.0j, log_parts, tuple(zero_roots))


def c_function(rs, m, lam):
    """c(m; lambda), normalized so that c(m; rho(m)) = 1."""
    try:
        den = c_tilde(rs, m, rho(rs, m))
    except CFunctionPole as err:
        raise CFunctionPole("c~(m; rho(m)) is singular, so c(m; .) is not defined",
                            kind='rho', m=m.as_tuple(), root=err.details.get('root'))
    num = c_tilde(rs, m, lam)
    if den.is_zero:
        raise CFunctionPole("c~(m; rho(m)) vanishes, so c(m; .) is not defined",
                            kind='rho', m=m.as_tuple())
    if num.is_zero:
        return 0.0 + 0.0j
    log_num = sum(num.log_parts.values())
    log_den = sum(den.log_parts.values())
    return complex(np.exp(log_num - log_den))


def rho_c_singular(rs, m):
    """True when 1/c~(m; rho(m)) is singular."""
    try:
        return c_tilde(rs, m, rho(rs, m)).is_zero
    except CFunctionPole:
        return False


def b0_gamma_arguments(rs, m, lam0):
    """Gamma arguments of the b_0 product, one pair per indivisible positive root.

    Short roots are skipped when m_s = 0 (type C: the class is not populated).
    """
    lam0 = np.asarray(lam0, dtype=complex)
    args = []
    for root in rs.indivisible_roots:
        if root.kind == 'short' and m.m_s == 0:
            continue
        half = complex(coroot_value(lam0, root)) / 2
        if root.kind == 'short':
            args.append((root.label(), half + m.m_s / 4 + 0.5))
            args.append((root.label(), half + m.m_s / 4 + m.m_l / 2))
        else:
            args.append((root.label(), half + m.m_m / 4 + 0.5))
            args.append((root.label(), half + m.m_m / 4))
    return args


def b0_regular(rs, m, lam0, tol=config.POLE_TOL):
    """True iff no Gamma factor of the b_0 product sits at a pole."""
    for label, z in b0_gamma_arguments(rs, m, lam0):
        if near_pole(z, tol):
            logger.debug("b0 singular at root %s (argument %s)", label, z)
            return False
    return True
