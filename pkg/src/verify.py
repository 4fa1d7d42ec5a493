"""Hull membership, the empirical boundedness classifier and the property suites for the
positivity results, estimates, asymptotics and the boundedness characterization."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from src import config
from src.cfunction import c_function
from src.errors import ConfigError, HogeomError, MethodUnavailable, NonConvergent, jsonable
from src.multiplicity import (Mult, deform, ell_range, in_M1, in_M2, in_M3, in_Mplus,
                              logistic_bound, logistic_bound_sq, standardize)
from src.rootsys import build_bc, dominant_representative, pairing, rho
from src.taufun import TauRequest, f_ell, g_ell

logger = logging.getLogger(__name__)

DEFAULT_MULTS = ((2.0, 1.0, 1.0), (4.0, 4.0, 1.0), (0.0, 2.0, 1.0))
BOUNDED_SLACK = 1e-6
LEADING_TOL = 1e-3
SYMMETRY_TOL = 1e-9
RAY_T = np.linspace(0.0, 12.0, 25)
SHARP_T = np.linspace(0.0, 8.0, 17)
BOUNDEDNESS_PAIRS = 7
BOUNDEDNESS_RANK_TWO = (DEFAULT_MULTS[0], DEFAULT_MULTS[1])
# evaluation failures that mean "no engine covers this point" rather than a wrong answer
UNCOVERED = (MethodUnavailable, NonConvergent)


# --- Hull membership ---
@dataclass(frozen=True)
class HullQuery:
    rho: tuple
    lam: tuple

    def contains(self):
        return hull_membership(np.asarray(self.rho), np.real(np.asarray(self.lam, dtype=complex)))


def hull_membership(rho_vec, re_lam, tol=1e-12):
    """Re lam in the convex hull of W rho: the dominant representative x+ satisfies
    rho - x+ in the nonnegative span of the simple roots (suffix sums >= 0)."""
    rho_vec = np.asarray(rho_vec, dtype=float)
    rs = build_bc(len(rho_vec))
    x_plus, _ = dominant_representative(rs, np.real(np.asarray(re_lam, dtype=complex)))
    coords = np.cumsum((rho_vec - x_plus)[::-1])[::-1]
    return bool(np.all(coords >= -tol))


def weyl_orbit_points(rho_vec):
    rho_vec = np.asarray(rho_vec, dtype=float)
    rs = build_bc(len(rho_vec))
    points = {tuple(np.round(w.apply(rho_vec), 12)) for w in rs.weyl_group}
    return np.array(sorted(points))


def brute_force_in_hull(rho_vec, point, tol=1e-9):
    """Convex-combination test over the Weyl orbit of rho: a feasibility linear program for
    weights w >= 0 with sum w = 1 and sum w_k p_k = point. The residual is recomputed from the
    returned weights."""
    points = weyl_orbit_points(rho_vec)
    a = np.r_[points.T, np.ones((1, points.shape[0]))]
    b = np.r_[np.asarray(point, dtype=float), np.ones(1)]
    res = linprog(np.zeros(points.shape[0]), A_eq=a, b_eq=b, bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10})
    if res.status == 2:
        return False
    if res.status != 0:
        logger.warning("Hull linear program ended with status %d: %s", res.status, res.message)
        return False
    return bool(np.linalg.norm(a @ res.x - b) <= tol)


def max_weyl_pairing(lam_real, x):
    """max_w (w lam)(x) for real lam: sorted absolute values paired in order."""
    return float(np.dot(np.sort(np.abs(lam_real)), np.sort(np.abs(np.asarray(x, dtype=float)))))


def sigma0(rs, lam0, tol=1e-12):
    """Short and medium positive roots orthogonal to lam0."""
    return [a for a in rs.indivisible_roots if abs(pairing(np.asarray(lam0), a.vector)) <= tol]


# --- Boundedness ---
@dataclass(frozen=True)
class BoundedVerdict:
    in_tube: bool
    verdict: str
    sup: float
    points: int
    skipped: int
    # sup of |F| minus its error estimate
    sup_low: float = 0.0

    def to_dict(self):
        return {'in_tube': self.in_tube, 'verdict': self.verdict, 'sup': self.sup,
                'sup_low': self.sup_low, 'points': self.points, 'skipped': self.skipped}


def coweight_rays(rank, weight=0.25):
    """Directions along each fundamental coweight (0,..,0,1,..,1) plus a small share of the others."""
    basis = [np.r_[np.zeros(k), np.ones(rank - k)] for k in range(rank)]
    rays = []
    for k, main in enumerate(basis):
        others = sum((b for j, b in enumerate(basis) if j != k), np.zeros(rank))
        rays.append(main + weight * others)
    return rays


def bounded_verdict(m, ell, lam, rank=None, t_grid=RAY_T, threshold=config.UNBOUNDED_THRESHOLD,
                    method='auto'):
    """'bounded' when sup |F_{ell,lam}| over the coweight rays stays below threshold."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    rank = rank or len(lam)
    req = TauRequest(m, ell, tuple(lam), method)
    sup, sup_low, points, skipped = 0.0, 0.0, 0, 0
    for ray in coweight_rays(rank):
        for t in t_grid:
            try:
                value = f_ell(req, t * ray)
            except UNCOVERED:
                skipped += 1
                continue
            points += 1
            sup = max(sup, abs(value.value))
            sup_low = max(sup_low, abs(value.value) - value.error)
    in_tube = hull_membership(rho(build_bc(rank), m), lam.real)
    verdict = 'unbounded' if sup > threshold else 'bounded'
    logger.debug("Boundedness of lam=%s, ell=%s: sup=%.4g over %d points (%d skipped)",
                 list(lam), ell, sup, points, skipped)
    return BoundedVerdict(in_tube, verdict, float(sup), points, skipped, float(sup_low))


# --- Suites ---
@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    slack: float = config.SUITE_SLACK
    mults: tuple = DEFAULT_MULTS
    ranks: tuple = (1, 2)
    workers: int = 0

    @classmethod
    def from_dict(cls, data):
        data = data or {}
        known = {'seed', 'slack', 'mults', 'ranks', 'workers'}
        kwargs = {k: v for k, v in data.items() if k in known}
        if 'mults' in kwargs:
            kwargs['mults'] = tuple(tuple(float(v) for v in m) for m in kwargs['mults'])
        if 'ranks' in kwargs:
            kwargs['ranks'] = tuple(int(r) for r in kwargs['ranks'])
            if any(r not in (1, 2, 3) for r in kwargs['ranks']):
                raise ConfigError("Suite ranks must be in {1, 2, 3}", ranks=list(kwargs['ranks']))
        return cls(**kwargs)

    def rng(self, salt):
        return np.random.default_rng([int(self.seed), salt])

    def multiplicities(self):
        return [Mult(*m) for m in self.mults]


@dataclass
class Case:
    params: dict
    check: object


@dataclass
class CaseResult:
    suite: str
    index: int
    params: dict
    passed: bool
    margin: float
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        margin = self.margin if np.isfinite(self.margin) else None
        return {'index': self.index, 'params': jsonable(self.params), 'passed': self.passed,
                'margin': margin, 'detail': jsonable(self.detail)}


@dataclass
class SuiteReport:
    name: str
    cases: list

    @property
    def passed(self):
        return all(c.passed for c in self.cases)

    @property
    def failed(self):
        return sum(1 for c in self.cases if not c.passed)

    @property
    def worst_margin(self):
        margins = [c.margin for c in self.cases]
        return float(min(margins)) if margins else None

    def summary(self):
        worst = self.worst_margin
        return {'suite': self.name, 'cases': len(self.cases), 'failed': self.failed,
                'passed': self.passed,
                'worst_margin': worst if worst is None or np.isfinite(worst) else None}

    def to_dict(self):
        out = self.summary()
        out['results'] = [c.to_dict() for c in self.cases]
        return out


def _execute(suite, index, case):
    try:
        margin, detail = case.check()
    except HogeomError as err:
        logger.info("Case %s[%d] raised %s: %s", suite, index, err.code, err.message)
        return CaseResult(suite, index, case.params, False, -np.inf, err.to_dict())
    return CaseResult(suite, index, case.params, bool(margin >= 0), float(margin), detail)


def _run_cases(suite, cases, workers):
    workers = workers or config.thread_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_execute, suite, i, case) for i, case in enumerate(cases)]
        return [f.result() for f in futures]


def _F(m, ell, lam, x):
    return f_ell(TauRequest(m, ell, tuple(np.atleast_1d(lam))), np.atleast_1d(x))


def _G(m, ell, lam, x):
    return g_ell(TauRequest(m, ell, tuple(np.atleast_1d(lam))), np.atleast_1d(x))


# --- Shipped grids ---
def taylor_points(rank):
    if rank == 1:
        return [np.array([v]) for v in (0.0, 0.25, -0.7)]
    if rank == 2:
        return [np.array(p) for p in ((0.0, 0.0), (0.2, -0.3), (0.45, 0.1), (-0.3, 0.5))]
    return [np.array(p) for p in ((0.0, 0.0, 0.0), (0.1, -0.2, 0.3), (0.25, 0.15, -0.2))]


def chamber_points(rank):
    if rank == 1:
        return [np.array([v]) for v in (0.6, 1.2, 2.0, 3.0)]
    if rank == 2:
        return [np.array(p) for p in ((0.6, 1.4), (-1.0, 2.0), (1.5, 0.5))]
    return [np.array(p) for p in ((0.5, 1.1, 1.8),)]


def sample_points(rank, ell, m):
    """Evaluable points: Taylor points always; chamber points only where c(m(ell); .) exists."""
    points = taylor_points(rank)
    if rank == 1 or abs(ell) < ell_range(m)[1]:
        points = points + chamber_points(rank)
    return points


def real_lambdas(rank):
    if rank == 1:
        return [np.array([v]) for v in (0.0, 0.73, 1.9, -3.3)]
    if rank == 2:
        return [np.array(p) for p in ((0.37, 1.13), (-0.61, 0.29), (1.79, -2.41))]
    return [np.array(p) for p in ((0.37, 1.13, 2.21),)]


def complex_lambdas(rank, rng, count=3):
    re = rng.uniform(-3.0, 3.0, size=(count, rank))
    im = rng.uniform(-4.0, 4.0, size=(count, rank))
    return list(re + 1j * im)


def ell_grid(m, closed=True):
    lo, hi = ell_range(m)
    values = [lo, 0.0, hi / 2, hi] if closed else [0.0, hi / 2, -hi / 2]
    out = []
    for v in values:
        v = float(v) + 0.0
        if v not in out:
            out.append(v)
    return out


def _suite_ranks(cfg):
    return [r for r in cfg.ranks if r in (1, 2)]


def _positivity(cfg):
    cases = []
    for m in cfg.multiplicities():
        for rank in _suite_ranks(cfg):
            for ell in ell_grid(m):
                for lam in real_lambdas(rank):
                    for x in sample_points(rank, ell, m):
                        cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, x=x),
                                          _positive_check(m, ell, lam, x, cfg)))
    return cases


def _positive_check(m, ell, lam, x, cfg, function=_F):
    def check():
        val = function(m, ell, lam, x)
        imag_ok = abs(val.value.imag) <= cfg.slack + val.error
        margin = val.value.real - config.POSITIVITY_FLOOR if imag_ok else -abs(val.value.imag)
        return margin, {'value': val.value, 'error': val.error, 'method': val.method}
    return check


def _real_part_bound(cfg, function=_F, salt=1):
    cases = []
    rng = cfg.rng(salt)
    for m in cfg.multiplicities():
        for rank in _suite_ranks(cfg):
            for ell in ell_grid(m):
                for lam in complex_lambdas(rank, rng):
                    for x in sample_points(rank, ell, m):
                        if function is _G and rank > 1 and np.linalg.norm(x) > config.TRUST_RADIUS:
                            continue
                        cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, x=x),
                                          _real_part_check(m, ell, lam, x, cfg, function)))
    return cases


def _real_part_check(m, ell, lam, x, cfg, function):
    def check():
        full = function(m, ell, lam, x)
        real = function(m, ell, lam.real, x)
        margin = real.value.real - abs(full.value) + cfg.slack + full.error + real.error
        return margin, {'abs_value': abs(full.value), 'bound': real.value.real}
    return check


def _sqrt_w(cfg, function=_F, salt=2):
    cases = []
    rng = cfg.rng(salt)
    for m in cfg.multiplicities():
        lo, hi = ell_range(m)
        for rank in _suite_ranks(cfg):
            for ell in sorted({lo, 0.0, hi}):
                for lam in complex_lambdas(rank, rng):
                    for x in sample_points(rank, ell, m):
                        if function is _G and rank > 1 and np.linalg.norm(x) > config.TRUST_RADIUS:
                            continue
                        cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, x=x),
                                          _sqrt_w_check(m, ell, lam, x, cfg, function)))
    return cases


def _sqrt_w_check(m, ell, lam, x, cfg, function):
    def check():
        val = function(m, ell, lam, x)
        order = build_bc(len(x)).weyl_order
        bound = np.sqrt(order) * np.exp(max_weyl_pairing(lam.real, x))
        return bound - abs(val.value) + cfg.slack + val.error, {'abs_value': abs(val.value),
                                                                 'bound': bound}
    return check


def _shift(cfg, function=_F):
    cases = []
    for m in cfg.multiplicities():
        for rank in _suite_ranks(cfg):
            mus = [np.zeros(rank), np.array([0.5])] if rank == 1 \
                else [np.zeros(rank), np.array([0.25, 0.9])]
            for ell in ell_grid(m):
                for lam in real_lambdas(rank):
                    for mu in mus:
                        for x in sample_points(rank, ell, m):
                            if function is _G and rank > 1 and np.linalg.norm(x) > config.TRUST_RADIUS:
                                continue
                            cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, mu=mu, x=x),
                                              _shift_check(m, ell, lam, mu, x, cfg, function)))
    return cases


def _shift_check(m, ell, lam, mu, x, cfg, function):
    def check():
        shifted = function(m, ell, lam + mu, x)
        base = function(m, ell, mu, x)
        bound = base.value.real * np.exp(max_weyl_pairing(lam, x))
        slack = cfg.slack + shifted.error + base.error * np.exp(max_weyl_pairing(lam, x))
        return bound - shifted.value.real + slack, {'value': shifted.value.real, 'bound': bound}
    return check


def _subadditivity(cfg):
    cases = []
    for m in cfg.multiplicities():
        lo, hi = ell_range(m)
        for rank in _suite_ranks(cfg):
            lams = [np.array([v]) for v in (0.0, 0.8, 2.6)] if rank == 1 \
                else [np.zeros(2), np.array([0.37, 1.13])]
            x1 = np.array([0.35]) if rank == 1 else np.array([0.1, 0.25])
            for ell in sorted({0.0, hi / 2, -hi / 2, hi}):
                for lam in lams:
                    for x in sample_points(rank, ell, m):
                        cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, x=x, x1=x1),
                                          _subadditivity_check(m, ell, lam, x, x1, cfg)))
    return cases


def _subadditivity_check(m, ell, lam, x, x1, cfg):
    def check():
        rs = build_bc(len(x))
        here = _F(m, ell, lam, x)
        there = _F(m, ell, lam, x + x1)
        growth = np.exp(pairing(lam + rho(rs, deform(m, ell)), x1))
        lower = there.value.real / growth
        upper = there.value.real * growth
        err = here.error + there.error * growth
        margin = min(here.value.real - lower, upper - here.value.real) + cfg.slack + err
        return margin, {'value': here.value.real, 'lower': lower, 'upper': upper}
    return check


def _sharp_lambdas(rs, m):
    rho_m = rho(rs, m)
    if rs.rank == 1:
        return [np.zeros(1), rho_m / 2]
    return [np.zeros(2), rho_m / 2, np.array([0.0, 1.3])]


def sharp_ratio_window(m, ell, lam0, direction, t_grid=SHARP_T):
    """(min, max) over the ray of F_{ell,lam0} / (prod_{Sigma0}(1 + alpha(x)) e^{(lam0 - rho)(x)})."""
    rs = build_bc(len(lam0))
    rho_m = rho(rs, m)
    zero_roots = sigma0(rs, lam0)
    ratios = []
    for t in t_grid:
        x = t * direction
        try:
            val = _F(m, ell, lam0, x)
        except UNCOVERED:
            continue
        scale = np.prod([1.0 + a(x) for a in zero_roots]) * np.exp(pairing(lam0 - rho_m, x))
        ratios.append(val.value.real / scale)
    return (min(ratios), max(ratios)) if ratios else (np.nan, np.nan)


def _sharp_ratio(cfg):
    cases = []
    for m in cfg.multiplicities():
        hi = ell_range(m)[1]
        for rank in _suite_ranks(cfg):
            rs = build_bc(rank)
            direction = np.array([1.0]) if rank == 1 else np.array([0.41, 0.91])
            for ell in sorted({0.0, hi / 2}):
                for lam0 in _sharp_lambdas(rs, m):
                    cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam0=lam0, direction=direction),
                                      _sharp_check(m, ell, lam0, direction)))
    return cases


def _sharp_check(m, ell, lam0, direction):
    def check():
        lo, hi = sharp_ratio_window(m, ell, lam0, direction)
        if not np.isfinite(lo) or lo <= 0:
            return -1.0, {'min_ratio': lo, 'max_ratio': hi}
        spread = hi / lo
        return config.SHARP_WINDOW - spread, {'min_ratio': lo, 'max_ratio': hi, 'spread': spread}
    return check


LOGISTIC_FIRST_OK = ((2, 1, 1), (4, 1, -1), (6, 1, -3), (0, 2, 0), (3, 0, -1.5))
LOGISTIC_SECOND_OK = ((2, 1, 1), (-1, 1, 2), (4, 1, -1))
# in M0 but outside the regions: the inequality must fail somewhere
LOGISTIC_FIRST_FAILS = ((-1, 1, 2),)
LOGISTIC_SECOND_FAILS = ((4, 1, -3),)


def _logistic_weights(cfg):
    t = np.linspace(-20.0, 20.0, 81)
    cases = []
    for triple in LOGISTIC_FIRST_OK:
        cases.append(Case(dict(m=triple, inequality='first', expect='holds'),
                          _logistic_check(Mult(*triple), logistic_bound, t, True, cfg)))
    for triple in LOGISTIC_SECOND_OK:
        cases.append(Case(dict(m=triple, inequality='second', expect='holds'),
                          _logistic_check(Mult(*triple), logistic_bound_sq, t, True, cfg)))
    for triple in LOGISTIC_FIRST_FAILS:
        cases.append(Case(dict(m=triple, inequality='first', expect='fails'),
                          _logistic_check(Mult(*triple), logistic_bound, t, False, cfg)))
    for triple in LOGISTIC_SECOND_FAILS:
        cases.append(Case(dict(m=triple, inequality='second', expect='fails'),
                          _logistic_check(Mult(*triple), logistic_bound_sq, t, False, cfg)))
    return cases


def _logistic_check(m, func, t, holds, cfg):
    def check():
        low = float(np.min(func(m, t)))
        detail = {'min': low, 'Mplus_or_M3': in_Mplus(m) or in_M3(m), 'M2_or_M3': in_M2(m) or in_M3(m)}
        return (low + cfg.slack if holds else -low), detail
    return check


def boundedness_lambdas(rs, m, rng, count=4):
    """Samples with Re lam inside the hull (a scaled orbit point) and outside it: w(rho + d)
    with d >= 1 coordinatewise, whose dominant representative exceeds rho by at least 1."""
    rho_m = rho(rs, m)
    out = [rho_m.astype(complex)]
    for k in range(count):
        w = rs.weyl_group[int(rng.integers(len(rs.weyl_group)))]
        inside = rng.uniform(0.0, 1.0) * w.apply(rho_m)
        outside = w.apply(rho_m + rng.uniform(1.0, 1.5, size=rs.rank))
        out.append(inside + 1j * rng.uniform(-3.0, 3.0, size=rs.rank))
        out.append(outside + 1j * rng.uniform(-3.0, 3.0, size=rs.rank))
    return out


def _boundedness(cfg):
    """BOUNDEDNESS_PAIRS in/out pairs per ell, three ells with |ell| < ell_max: 45 lambdas per
    (m, rank). Rank 1 adds ell = ell_max."""
    cases = []
    rng = cfg.rng(3)
    for m in cfg.multiplicities():
        hi = ell_range(m)[1]
        for rank in _suite_ranks(cfg):
            if rank > 1 and m.as_tuple() not in BOUNDEDNESS_RANK_TWO:
                continue
            rs = build_bc(rank)
            ells = sorted({0.0, hi / 2, -hi / 2})
            if rank == 1:
                ells.append(hi)
            for ell in ells:
                for lam in boundedness_lambdas(rs, m, rng, count=BOUNDEDNESS_PAIRS):
                    cases.append(Case(dict(m=m.as_tuple(), ell=ell, lam=lam, rank=rank),
                                      _bounded_check(m, ell, lam, rank)))
    return cases


def _bounded_check(m, ell, lam, rank):
    def check():
        res = bounded_verdict(m, ell, lam, rank)
        expected = 'bounded' if res.in_tube else 'unbounded'
        if res.verdict != expected:
            return -1.0, res.to_dict()
        if res.in_tube:
            return 1.0 + BOUNDED_SLACK - res.sup_low, res.to_dict()
        return res.sup - config.UNBOUNDED_THRESHOLD, res.to_dict()
    return check


def _tau(cfg):
    """tau_{-ell} statements for G alongside F: positivity, real-part and sqrt|W| bounds,
    the shift bound and the symmetry F_{ell} = F_{-ell}."""
    cases = []
    for m in cfg.multiplicities():
        for rank in _suite_ranks(cfg):
            for ell in ell_grid(m):
                for lam in real_lambdas(rank):
                    for x in taylor_points(rank) + ([np.array([1.1]), np.array([-2.5])] if rank == 1 else []):
                        cases.append(Case(dict(item='positivity_G', m=m.as_tuple(), ell=ell, lam=lam, x=x),
                                          _positive_check(m, ell, lam, x, cfg, function=_G)))
                        cases.append(Case(dict(item='symmetry', m=m.as_tuple(), ell=ell, lam=lam, x=x),
                                          _symmetry_check(m, ell, lam, x)))
    for case in _real_part_bound(cfg, function=_G, salt=11):
        case.params['item'] = 'real_part_G'
        cases.append(case)
    for case in _sqrt_w(cfg, function=_G, salt=12):
        case.params['item'] = 'sqrt_w_G'
        cases.append(case)
    for case in _shift(cfg, function=_G):
        case.params['item'] = 'shift_G'
        cases.append(case)
    return cases


def _symmetry_check(m, ell, lam, x):
    def check():
        plus = _F(m, ell, lam, x)
        minus = _F(m, -ell, lam, x)
        diff = abs(plus.value - minus.value)
        tol = SYMMETRY_TOL * max(1.0, abs(plus.value)) + plus.error + minus.error
        return tol - diff, {'plus': plus.value, 'minus': minus.value}
    return check


DEFORMATION_GRID = [(s, mm, l) for s in (-1.0, 0.0, 1.5, 4.0) for mm in (0.0, 2.0)
                    for l in (-3.0, -1.0, 0.0, 1.0)]


def _deformation(cfg):
    cases = []
    for triple in DEFORMATION_GRID:
        cases.append(Case(dict(m0=triple), _deformation_check(Mult(*triple))))
    return cases


def _deformation_check(m0):
    def check():
        in_m0 = m0.m_m >= 0 and m0.m_s + m0.m_l >= 0
        expected = in_Mplus(m0) or in_M3(m0)
        if not in_m0:
            return 1.0, {'skipped': 'outside M0'}
        try:
            m, ell = standardize(m0)
        except HogeomError:
            return (1.0 if not expected else -1.0), {'representable': False, 'expected': expected}
        lo, hi = ell_range(m)
        back = deform(m, ell)
        ok = (expected and in_Mplus(m) and lo <= ell <= hi
              and np.allclose(back.as_tuple(), m0.as_tuple()))
        interior = lo < ell < hi and m0.m_m > 0
        ok = ok and interior == in_M1(m0)
        return (1.0 if ok else -1.0), {'m': m.as_tuple(), 'ell': ell, 'ell_range': [lo, hi]}
    return check


def _hull(cfg):
    cases = []
    for rank in (1, 2, 3):
        cases.append(Case(dict(rank=rank, samples=500), _hull_check(rank, cfg.rng(20 + rank))))
    return cases


def _hull_check(rank, rng):
    def check():
        rho_m = rho(build_bc(rank), Mult(2.0, 1.0, 1.0))
        scale = 1.3 * float(np.max(rho_m))
        mismatches = 0
        inside = 0
        for point in rng.uniform(-scale, scale, size=(500, rank)):
            fast = hull_membership(rho_m, point)
            inside += fast
            if fast != brute_force_in_hull(rho_m, point):
                mismatches += 1
        return -float(mismatches), {'mismatches': mismatches, 'inside': inside}
    return check


def _leading(cfg):
    cases = []
    for m in cfg.multiplicities():
        if not in_M1(m):
            continue
        for rank in _suite_ranks(cfg):
            lam = np.array([1.3 + 0.4j]) if rank == 1 else np.array([1.0 + 0.2j, 2.6 - 0.3j])
            direction = np.array([1.0]) if rank == 1 else np.array([0.45, 0.89])
            t = 10.0 if rank == 1 else 14.0
            cases.append(Case(dict(m=m.as_tuple(), lam=lam, direction=direction, t=t),
                              _leading_check(m, lam, t * direction)))
    return cases


def _leading_check(m, lam, x):
    def check():
        rs = build_bc(len(x))
        val = _F(m, 0.0, lam, x)
        ratio = val.value * np.exp(-pairing(lam - rho(rs, m), x))
        c = c_function(rs, m, lam)
        diff = abs(ratio - c)
        return LEADING_TOL * max(1.0, abs(c)) - diff, {'ratio': ratio, 'c': c}
    return check


SUITES = {
    'positivity': _positivity,
    'real_part_bound': _real_part_bound,
    'sqrt_w': _sqrt_w,
    'shift': _shift,
    'subadditivity': _subadditivity,
    'sharp_ratio': _sharp_ratio,
    'logistic_weights': _logistic_weights,
    'boundedness': _boundedness,
    'tau': _tau,
    'deformation': _deformation,
    'hull': _hull,
    'leading': _leading,
}


def suite_names(name):
    if name == 'all':
        return list(SUITES)
    if name not in SUITES:
        raise ConfigError(f"Unknown suite {name!r}", suite=name, choices=['all'] + list(SUITES))
    return [name]


def run_suite(name, cfg=None):
    """Runs one suite; a suite passes iff every case passes."""
    cfg = cfg or SuiteConfig()
    if name not in SUITES:
        raise ConfigError(f"Unknown suite {name!r}", suite=name, choices=list(SUITES))
    cases = SUITES[name](cfg)
    logger.info("Running suite %s with %d cases", name, len(cases))
    report = SuiteReport(name, _run_cases(name, cases, cfg.workers))
    logger.info("Suite %s: %d/%d cases failed", name, report.failed, len(report.cases))
    return report


def run_suites(name, cfg=None):
    return [run_suite(n, cfg) for n in suite_names(name)]
