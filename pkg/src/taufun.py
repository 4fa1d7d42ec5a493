"""tau_{-ell} hypergeometric functions F_{ell,lam}(m) = u^{-ell} F_lam(m(ell)) and
G_{ell,lam}(m) = u^{-ell} G_lam(m(ell)), dispatched over the evaluation engines."""
import logging
from dataclasses import dataclass
from math import comb

import numpy as np

from src import config
from src.errors import (CFunctionPole, ConfigError, GenericityViolation, HogeomError,
                        MethodUnavailable, NonConvergent)
from src.hcseries import f_generic, f_regularized, is_regular
from src.localseries import eval_taylor, get_f_taylor, get_g_taylor, layer_size
from src.multiplicity import deform
from src.rankone import f_ell_r1, g_ell_r1
from src.rootsys import build_bc, dominant_representative, rho

logger = logging.getLogger(__name__)

METHODS = ('auto', 'hcseries', 'taylor', 'rankone')
# relative rounding allowance of the closed forms
RANKONE_ERROR = 1e-13
# beyond this |x| the rank-one auto path prefers the Harish-Chandra series
RANKONE_SERIES_X = 4.0


@dataclass(frozen=True)
class TauRequest:
    m: object
    ell: float
    lam: tuple
    method: str = 'auto'
    max_height: int = config.MAX_HEIGHT
    degree: int = config.TAYLOR_DEGREE

    def __post_init__(self):
        if self.m.m_l != 1:
            raise ConfigError(f"tau functions need m_l = 1, got m = {self.m.as_tuple()}",
                              m=self.m.as_tuple())
        if self.method not in METHODS:
            raise ConfigError(f"Unknown method {self.method!r}", method=self.method,
                              choices=list(METHODS))
        lam = tuple(complex(v) for v in np.atleast_1d(np.asarray(self.lam, dtype=complex)))
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'ell', float(self.ell))

    @property
    def rank(self):
        return len(self.lam)

    @property
    def deformed(self):
        return deform(self.m, self.ell)

    def replace(self, **changes):
        fields = dict(m=self.m, ell=self.ell, lam=self.lam, method=self.method,
                      max_height=self.max_height, degree=self.degree)
        fields.update(changes)
        return TauRequest(**fields)


@dataclass(frozen=True)
class TauValue:
    value: complex
    error: float
    method: str


def u_func(rs, x):
    """u(x) = prod_j cosh(beta_j(x)/2) = prod_j cosh(x_j)."""
    return float(np.prod(np.cosh(np.asarray(x, dtype=float))))


def rho_ell(rs, m, ell):
    """rho(m) - (ell/2) sum_j beta_j."""
    return rho(rs, m) - ell * np.ones(rs.rank)


def _point(req, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (req.rank,):
        raise ConfigError(f"Point {list(x)} does not match rank {req.rank}", x=list(x), rank=req.rank)
    return x


def _scaled(value, u_power, method):
    return TauValue(complex(u_power * value.value), float(abs(u_power) * value.error), method)


def _series_once(rs, m, lam, x, max_height, strict=False):
    if is_regular(rs, lam):
        try:
            return f_generic(rs, m, lam, x, max_height)
        except (GenericityViolation, CFunctionPole) as err:
            if strict or (isinstance(err, CFunctionPole) and err.details.get('kind') == 'rho'):
                raise
            logger.debug("lambda=%s is not generic (%s); using the regularized average", lam, err.code)
    return f_regularized(rs, m, lam, x, max_height=max_height)


def _series_value(rs, m, lam, x, max_height, strict=False):
    """Series value with max_height raised in steps until the tail estimate meets SERIES_REL_TOL."""
    height = int(max_height)
    while True:
        value = _series_once(rs, m, lam, x, height, strict)
        if value.method != 'hcseries' or value.error <= config.SERIES_REL_TOL * abs(value.value):
            return value
        higher = height + config.HEIGHT_STEP
        if higher > config.MAX_SERIES_HEIGHT or comb(higher + rs.rank, rs.rank) > config.MAX_SERIES_POINTS:
            logger.debug("Series at x=%s stops at height %d with error %.3g", list(x), height, value.error)
            return value
        logger.debug("Raising series height %d -> %d (error %.3g)", height, higher, value.error)
        height = higher


def _hcseries(req, rs, x, strict=False):
    """u^{-ell} F_lam(m(ell)); when c(m(ell); .) is undefined the identity F_{ell} = F_{-ell} is used."""
    lam = np.asarray(req.lam)
    try:
        value = _series_value(rs, req.deformed, lam, x, req.max_height, strict)
        ell = req.ell
    except CFunctionPole as err:
        if err.details.get('kind') != 'rho' or req.ell == 0:
            raise
        logger.debug("c(m(%s); .) undefined; evaluating at -ell", req.ell)
        value = _series_value(rs, deform(req.m, -req.ell), lam, x, req.max_height, strict)
        ell = -req.ell
    return _scaled(value, u_func(rs, x) ** -ell, 'hcseries')


def _taylor_f(req, rs, x):
    poly = get_f_taylor(rs, req.deformed, np.asarray(req.lam), req.degree)
    return eval_taylor(poly, x)


def _auto_degree(rank, degree, x):
    """req.degree inside the trust radius; beyond it the largest degree the basis limit allows."""
    if np.linalg.norm(x) <= config.TRUST_RADIUS:
        return degree
    best = degree
    for d in range(degree + 1, config.MAX_TAYLOR_DEGREE + 1):
        if layer_size(rank, d) > config.MAX_TAYLOR_BASIS:
            break
        best = d
    return best


def _auto(req, rs, x):
    """Rank >= 2: the Harish-Chandra series in the chamber (margin >= CHAMBER_MARGIN) while the
    Gamma recursion is generic, the Taylor solver otherwise. Beyond the trust radius the
    Taylor degree is raised and a remainder above TAYLOR_FALLBACK_TOL is NonConvergent.
    In the chamber a failed Taylor evaluation ends in the regularized series."""
    x_plus, _ = dominant_representative(rs, x)
    in_chamber = rs.chamber_margin(x_plus) >= config.CHAMBER_MARGIN
    if in_chamber:
        try:
            return _hcseries(req, rs, x, strict=True)
        except HogeomError as err:
            if isinstance(err, ConfigError):
                raise
            logger.info("Series unavailable at x=%s (%s); using the Taylor solver", list(x), err.code)
    try:
        return _taylor_auto(req, rs, x)
    except HogeomError as err:
        if isinstance(err, ConfigError) or not in_chamber:
            raise
        logger.warning("Taylor solver failed at x=%s (%s); using the regularized series", list(x), err.code)
        return _hcseries(req, rs, x)


def _taylor_auto(req, rs, x):
    degree = _auto_degree(rs.rank, req.degree, x)
    value = _taylor_f(req.replace(degree=degree), rs, x)
    if np.linalg.norm(x) > config.TRUST_RADIUS:
        logger.info("x=%s lies outside the trust radius; Taylor degree %d", list(x), degree)
        if value.error > config.TAYLOR_FALLBACK_TOL * abs(value.value):
            raise NonConvergent(f"Taylor series of degree {degree} does not converge at x = {list(x)}",
                                x=list(x), degree=degree, error=value.error)
    return _scaled(value, u_func(rs, x) ** -req.ell, 'taylor')


def f_ell(req, x):
    """F_{ell,lam}(m; x) with an error estimate."""
    x = _point(req, x)
    rs = build_bc(req.rank)
    method = req.method
    if method == 'auto' and rs.rank == 1:
        return _rankone_auto(req, rs, x)
    if method == 'auto':
        return _auto(req, rs, x)
    if method == 'rankone':
        if rs.rank != 1:
            raise MethodUnavailable("Closed forms exist only in rank one", rank=rs.rank)
        return _rankone_f(req, x)
    if method == 'hcseries':
        return _hcseries(req, rs, x)
    return _scaled(_taylor_f(req, rs, x), u_func(rs, x) ** -req.ell, 'taylor')


def _rankone_auto(req, rs, x):
    """Closed form first; far out, where its series converges like tanh^{2n} x, the
    Harish-Chandra series is tried first. Each engine backs up the other."""
    engines = [_rankone_f, lambda r, p: _hcseries(r, rs, np.abs(p))]
    if abs(x[0]) > RANKONE_SERIES_X:
        engines.reverse()
    first_error = None
    for engine in engines:
        try:
            return engine(req, x)
        except HogeomError as err:
            if isinstance(err, ConfigError):
                raise
            logger.info("Rank-one evaluation at x=%s fell through (%s)", list(x), err.code)
            first_error = first_error or err
    raise first_error


def _rankone_f(req, x):
    value = f_ell_r1(req.m, req.ell, req.lam[0], x[0])
    return TauValue(value, RANKONE_ERROR * max(1.0, abs(value)), 'rankone')


def g_ell(req, x):
    """G_{ell,lam}(m; x); only the Taylor and rank-one engines produce G."""
    x = _point(req, x)
    rs = build_bc(req.rank)
    method = req.method
    if method == 'auto':
        if rs.rank == 1:
            method = 'rankone'
        elif np.linalg.norm(x) <= config.TRUST_RADIUS:
            method = 'taylor'
        else:
            raise MethodUnavailable(f"G is only available within |x| <= {config.TRUST_RADIUS} "
                                    f"in rank {rs.rank}", x=list(x))
    if method == 'hcseries':
        raise MethodUnavailable("The Harish-Chandra series does not produce G", method=method)
    if method == 'rankone':
        if rs.rank != 1:
            raise MethodUnavailable("Closed forms exist only in rank one", rank=rs.rank)
        value = g_ell_r1(req.m, req.ell, req.lam[0], x[0])
        return TauValue(value, RANKONE_ERROR * max(1.0, abs(value)), 'rankone')
    poly = get_g_taylor(rs, req.deformed, np.asarray(req.lam), req.degree)
    return _scaled(eval_taylor(poly, x), u_func(rs, x) ** -req.ell, 'taylor')


def evaluate(req, x, function='f'):
    if function == 'f':
        return f_ell(req, x)
    if function == 'g':
        return g_ell(req, x)
    raise ConfigError(f"Unknown function {function!r}", function=function, choices=['f', 'g'])
