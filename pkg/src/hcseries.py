"""Harish-Chandra series Phi_lambda(m; x) and the generic-lambda expansion
F_lambda = sum_w c(m; w lambda) Phi_{w lambda} on the positive chamber."""
import logging
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache
from threading import Lock

import numpy as np

from src import config
from src.cfunction import c_function
from src.errors import GenericityViolation, OutsideChamber, TruncationNotConverged
from src.rootsys import dominant_representative, lattice_shells, mult_of, pairing, rho

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    error: float
    method: str = ''


@dataclass(frozen=True)
class HCSeriesState:
    points: tuple
    values: np.ndarray
    heights: np.ndarray
    vectors: np.ndarray
    max_height: int
    lam: np.ndarray
    m: object
    genericity_margin: float
    resonant: tuple = ()

    @property
    def gamma(self):
        return dict(zip(self.points, self.values))

    def coefficient(self, n):
        return self.gamma.get(tuple(n), 0.0 + 0.0j)


@dataclass(frozen=True)
class _Predecessors:
    """CSR table: for point i the entries ptr[i]:ptr[i+1] list (pred, root, base)
    with base = <mu, alpha> - 2 n <alpha, alpha>."""
    points: tuple
    vectors: np.ndarray
    heights: np.ndarray
    ptr: np.ndarray
    pred: np.ndarray
    root: np.ndarray
    base: np.ndarray


@lru_cache(maxsize=16)
def _predecessors(rs, max_height):
    points = lattice_shells(rs, max_height)
    index = {p: i for i, p in enumerate(points)}
    vectors = np.array([rs.lattice_vector(p) for p in points])
    heights = np.array([sum(p) for p in points])
    ptr, pred, root_idx, base = [0], [], [], []
    for i, p in enumerate(points):
        mu = vectors[i]
        for a, root in enumerate(rs.positive_roots):
            step = np.array(root.simple)
            n = 1
            while True:
                q = tuple(np.array(p) - n * step)
                if min(q) < 0:
                    break
                pred.append(index[q])
                root_idx.append(a)
                base.append(pairing(mu, root.vector) - 2 * n * root.norm2)
                n += 1
        ptr.append(len(pred))
    logger.debug("Predecessor table for %r up to height %d: %d points, %d links",
                 rs, max_height, len(points), len(pred))
    return _Predecessors(tuple(points), vectors, heights, np.array(ptr), np.array(pred, dtype=int),
                         np.array(root_idx, dtype=int), np.array(base, dtype=float))


def gamma_coeffs(rs, m, lam, max_height=config.MAX_HEIGHT, tol=config.GENERICITY_TOL):
    """Solves <mu, mu - 2 lam> Gamma_mu = 2 sum_alpha m_alpha sum_n Gamma_{mu - 2n alpha} <mu + rho - 2n alpha - lam, alpha>.

    A vanishing left factor with a vanishing right side sets Gamma_mu = 0 and
    records mu as resonant; a nonvanishing right side is a genericity violation.
    """
    lam = np.asarray(lam, dtype=complex)
    table = _predecessors(rs, int(max_height))
    rho_m = rho(rs, m)
    shift = np.array([mult_of(m, a) for a in rs.positive_roots], dtype=complex)
    rl = np.array([pairing(rho_m - lam, a.vector) for a in rs.positive_roots])
    coef = shift[table.root] * (table.base + rl[table.root])
    values = np.zeros(len(table.points), dtype=complex)
    values[0] = 1.0
    margin = np.inf
    resonant = []
    for i in range(1, len(table.points)):
        s, e = table.ptr[i], table.ptr[i + 1]
        terms = coef[s:e] * values[table.pred[s:e]]
        rhs = 2.0 * terms.sum()
        mu = table.vectors[i]
        mu2 = float(mu @ mu)
        d = mu2 - 2.0 * pairing(mu, lam)
        margin = min(margin, abs(d))
        if abs(d) <= tol * (1.0 + mu2):
            if abs(rhs) <= tol * (1.0 + 2.0 * np.abs(terms).sum()):
                resonant.append(table.points[i])
                continue
            raise GenericityViolation(f"<mu, mu - 2 lambda> vanishes at mu = {table.points[i]}",
                                      mu=table.points[i], lam=lam)
        values[i] = rhs / d
    if resonant:
        logger.info("Gamma coefficients set to zero at %d resonant lattice points", len(resonant))
    return HCSeriesState(table.points, values, table.heights, table.vectors, int(max_height),
                         lam, m, float(margin), tuple(resonant))


# --- Gamma table cache ---
_state_cache = OrderedDict()
_state_lock = Lock()
_CACHE_SIZE = 256


def get_state(rs, m, lam, max_height=config.MAX_HEIGHT):
    """Shared Gamma table for (m, lambda, max_height), built on first use."""
    lam = np.asarray(lam, dtype=complex)
    key = (rs.rank, m.as_tuple(), tuple(np.round(lam, 14)), int(max_height))
    with _state_lock:
        state = _state_cache.get(key)
        if state is not None:
            _state_cache.move_to_end(key)
            return state
    state = gamma_coeffs(rs, m, lam, max_height)
    with _state_lock:
        _state_cache[key] = state
        while len(_state_cache) > _CACHE_SIZE:
            _state_cache.popitem(last=False)
    return state


def _check_chamber(rs, x, margin):
    gap = rs.chamber_margin(x)
    if gap <= 0 or gap < margin:
        raise OutsideChamber(f"x = {list(x)} is not in the chamber with margin {margin}",
                             x=list(x), margin=margin, simple_min=gap)


def phi(rs, m, lam, x, state=None, margin=config.CHAMBER_MARGIN):
    """e^{(lam - rho)(x)} sum_mu Gamma_mu e^{-mu(x)} truncated at state.max_height."""
    x = np.asarray(x, dtype=float)
    _check_chamber(rs, x, margin)
    lam = np.asarray(lam, dtype=complex)
    state = state if state is not None else get_state(rs, m, lam)
    weights = np.exp(-(state.vectors @ x))
    terms = state.values * weights
    shells = (np.bincount(state.heights, weights=terms.real, minlength=state.max_height + 1)
              + 1j * np.bincount(state.heights, weights=terms.imag, minlength=state.max_height + 1))
    total = shells.sum()
    prefactor = np.exp(pairing(lam - rho(rs, m), x))
    error = _tail_estimate(np.abs(shells), abs(total))
    return SeriesValue(complex(prefactor * total), float(abs(prefactor) * error), 'hcseries')


def _tail_estimate(mags, total):
    """Geometric tail bound from the last two shells against the two before."""
    if len(mags) < 4:
        return float(mags[-1]) if len(mags) > 1 else 0.0
    t = max(mags[-1], mags[-2])
    s = max(mags[-3], mags[-4])
    negligible = 1e-15 * max(total, 1e-300)
    if t <= negligible:
        return float(t + negligible)
    if s == 0 or t >= s:
        raise TruncationNotConverged("Harish-Chandra series shells do not decay",
                                     last=float(t), previous=float(s))
    q = min(np.sqrt(t / s), 0.99)
    return float(t / (1.0 - q) + negligible)


def weyl_orbit(rs, lam):
    return [w.apply(np.asarray(lam, dtype=complex)) for w in rs.weyl_group]


def is_regular(rs, lam, tol=1e-9):
    lam = np.asarray(lam, dtype=complex)
    for root in rs.positive_roots:
        if abs(pairing(lam, root.vector)) <= tol:
            return False
    return True


def f_generic(rs, m, lam, x, max_height=config.MAX_HEIGHT, margin=config.CHAMBER_MARGIN):
    """F_lambda(m; x) = sum_w c(m; w lam) Phi_{w lam}(m; x), x moved to the dominant chamber."""
    lam = np.asarray(lam, dtype=complex)
    if not is_regular(rs, lam):
        raise GenericityViolation("lambda is not regular: its Weyl orbit has repeated points",
                                  lam=lam)
    x_plus, _ = dominant_representative(rs, x)
    _check_chamber(rs, x_plus, margin)
    value = 0.0 + 0.0j
    error = 0.0
    magnitude = 0.0
    for wlam in weyl_orbit(rs, lam):
        c = c_function(rs, m, wlam)
        if c == 0:
            continue
        term = phi(rs, m, wlam, x_plus, get_state(rs, m, wlam, max_height), margin)
        value += c * term.value
        error += abs(c) * term.error
        magnitude += abs(c * term.value)
    error += 1e-15 * magnitude
    return SeriesValue(complex(value), float(error), 'hcseries')


def _regularizing_direction(rank):
    v = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0])[:rank])
    return v / np.linalg.norm(v)


def f_regularized(rs, m, lam, x, eps=config.REGULARIZE_EPS, max_height=config.MAX_HEIGHT,
                  margin=config.CHAMBER_MARGIN):
    """F_lambda at a singular lambda as the limit of symmetric averages over lambda +- eps v.

    The average is even in eps, so one Richardson step (eps, eps/2) removes the eps^2 term.
    """
    lam = np.asarray(lam, dtype=complex)
    v = _regularizing_direction(rs.rank)

    def average(h):
        plus = f_generic(rs, m, lam + h * v, x, max_height, margin)
        minus = f_generic(rs, m, lam - h * v, x, max_height, margin)
        return (plus.value + minus.value) / 2, (plus.error + minus.error) / 2

    coarse, err_coarse = average(eps)
    fine, err_fine = average(eps / 2)
    value = (4 * fine - coarse) / 3
    error = abs(fine - coarse) / 3 + (4 * err_fine + err_coarse) / 3
    return SeriesValue(complex(value), float(error), 'hcseries-regularized')
