"""Multiplicity triples (m_s, m_m, m_l), the ell-deformation and the region taxonomy."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from src.errors import ConfigError, NotRepresentable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mult:
    m_s: float
    m_m: float
    m_l: float

    @classmethod
    def parse(cls, text):
        """Parses 's,m,l' (three comma separated numbers)."""
        parts = [p.strip() for p in str(text).split(',')]
        if len(parts) != 3:
            raise ConfigError(f"Multiplicity must be a triple s,m,l, got {text!r}", value=text)
        try:
            return cls(*(float(p) for p in parts))
        except ValueError:
            raise ConfigError(f"Multiplicity entries must be numbers, got {text!r}", value=text)

    def as_tuple(self):
        return (self.m_s, self.m_m, self.m_l)


@dataclass(frozen=True)
class ComplexMult(Mult):
    m_s: complex
    m_m: complex
    m_l: complex


@dataclass(frozen=True)
class RegionFlags:
    in_Mplus: bool
    in_M0: bool
    in_M1: bool
    in_M2: bool
    in_M3: bool
    ell_min: float
    ell_max: float

    def to_dict(self):
        return {
            'Mplus': self.in_Mplus,
            'M0': self.in_M0,
            'M1': self.in_M1,
            'M2': self.in_M2,
            'M3': self.in_M3,
            'ell_range': [self.ell_min, self.ell_max],
        }


def deform(m, ell):
    """m(ell) = (m_s + 2 ell, m_m, m_l - 2 ell)."""
    return type(m)(m.m_s + 2 * ell, m.m_m, m.m_l - 2 * ell)


def in_Mplus(m):
    return m.m_s >= 0 and m.m_m >= 0 and m.m_l >= 0


def in_M0(m):
    return m.m_m >= 0 and m.m_s + m.m_l >= 0


def in_M1(m):
    return m.m_m > 0 and m.m_s > 0 and m.m_s + 2 * m.m_l > 0


def in_M2(m):
    return m.m_m >= 0 and m.m_l >= 0 and m.m_s + m.m_l >= 0


def in_M3(m):
    return m.m_m >= 0 and m.m_l <= 0 and m.m_s + 2 * m.m_l >= 0


def ell_range(m):
    return (-m.m_s / 2, m.m_s / 2 + m.m_l)


def region_flags(m):
    lo, hi = ell_range(m)
    return RegionFlags(in_Mplus(m), in_M0(m), in_M1(m), in_M2(m), in_M3(m), lo, hi)


def standardize(m0):
    """Writes m0 in M+ u M3 as deform(m, ell) with m in M+ and ell in [ell_min(m), ell_max(m)]."""
    if not (in_Mplus(m0) or in_M3(m0)):
        raise NotRepresentable(f"{m0.as_tuple()} lies outside M+ u M3", m=m0.as_tuple())
    m = Mult(m0.m_s + m0.m_l, m0.m_m, 0.0)
    ell = -m0.m_l / 2 + 0.0
    logger.debug("Standardized %s as m=%s, ell=%s", m0.as_tuple(), m.as_tuple(), ell)
    return m, ell


def complex_region_flags(m):
    """Membership in M_{C,+} (Re m_alpha >= 0) and M_{C,0} (Re(m_alpha + m_2alpha) >= 0).

    For BC the indivisible classes are short (partner long) and medium (no partner).
    """
    re = np.real
    plus = re(m.m_s) >= 0 and re(m.m_m) >= 0 and re(m.m_l) >= 0
    zero = re(m.m_s + m.m_l) >= 0 and re(m.m_m) >= 0
    return {'MCplus': bool(plus), 'MC0': bool(zero)}


def logistic_bound(m, t):
    """m_s/2 + m_l/(1+e^t); nonnegative for m in M+ u M3 and real t."""
    return m.m_s / 2 + m.m_l * expit(-np.asarray(t, dtype=float))


def logistic_bound_sq(m, t):
    """m_s/2 + m_l (1+e^{2t})/(1+e^t)^2; nonnegative for m in M2 u M3 and real t."""
    t = np.asarray(t, dtype=float)
    return m.m_s / 2 + m.m_l * (1 - 2 * expit(t) * expit(-t))
