"""Taylor expansion of G_lambda(m) at the origin from the Cherednik eigen-system, and
of F_lambda(m) as its Weyl average.

Layer k holds the coefficients of the total-degree-k monomials, in the order of
`monomials(rank, k)`. With D_alpha P = (P - P o r_alpha) / (2 alpha) and
t/(1 - e^{-t}) = sum_n b_n t^n the eigen-system T_xi G = lambda(xi) G reads, in degree k,

    d_i G_{k+1} + sum_alpha m_alpha alpha_i D_alpha G_{k+1} = Q_i,
    Q_i = (lambda + rho)_i G_k - sum_alpha m_alpha alpha_i sum_{n>=1} b_n (2 alpha)^n D_alpha G_{k+1-n}.

Contracting with x_i (Euler identity) gives the linear system
((k+1) I + sum_alpha m_alpha/2 (I - R_alpha)) G_{k+1} = sum_i x_i Q_i, whose solution is then
checked against every d_i equation.
"""
import logging
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from threading import Lock

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu, spsolve

from src import config
from src.errors import (ConfigError, DivisionNotExact, InconsistentSystem,
                        OutsideTrustRadius)
from src.rootsys import mult_of, rho
from src.specfun import bern_kernel_coeffs

logger = logging.getLogger(__name__)


def monomials(rank, k):
    """Exponent tuples of total degree k, descending lex."""
    return _monomials(int(rank), int(k))


@lru_cache(maxsize=None)
def _monomials(rank, k):
    if rank == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in _monomials(rank - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def layer_size(rank, k):
    return comb(k + rank - 1, rank - 1)


def check_degree(rank, degree):
    if not 0 <= degree <= config.MAX_TAYLOR_DEGREE:
        raise ConfigError(f"Taylor degree must be in [0, {config.MAX_TAYLOR_DEGREE}], got {degree}",
                          degree=degree)
    size = layer_size(rank, degree)
    if size > config.MAX_TAYLOR_BASIS:
        raise ConfigError(f"Degree {degree} in rank {rank} needs {size} monomials per layer "
                          f"(limit {config.MAX_TAYLOR_BASIS})", rank=rank, degree=degree, size=size)


# --- Layer algebra ---
class _LayerAlgebra:
    """Sparse linear maps between homogeneous layers for one (rank, degree)."""

    def __init__(self, rs, degree):
        self.rs = rs
        self.rank = rs.rank
        self.degree = degree
        self.mons = [np.array(monomials(self.rank, k), dtype=int).reshape(-1, self.rank)
                     for k in range(degree + 2)]
        self.index = [{tuple(e): n for n, e in enumerate(self.mons[k])} for k in range(degree + 2)]
        self._lu = {}
        self._lock = Lock()

    def linear_mul(self, coeffs, k):
        """Multiplication by the linear form sum c_i x_i, layer k -> k + 1."""
        rows, cols, vals = [], [], []
        for col, e in enumerate(self.mons[k]):
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                f = e.copy()
                f[i] += 1
                rows.append(self.index[k + 1][tuple(f)])
                cols.append(col)
                vals.append(float(c))
        shape = (len(self.mons[k + 1]), len(self.mons[k]))
        return sparse.csr_matrix((vals, (rows, cols)), shape=shape)

    @lru_cache(maxsize=None)
    def root_mul(self, a, k):
        return self.linear_mul(2.0 * self.rs.positive_roots[a].vector, k)

    @lru_cache(maxsize=None)
    def deriv(self, i, k):
        """d/dx_i, layer k -> k - 1."""
        rows, cols, vals = [], [], []
        for col, e in enumerate(self.mons[k]):
            if e[i] == 0:
                continue
            f = e.copy()
            f[i] -= 1
            rows.append(self.index[k - 1][tuple(f)])
            cols.append(col)
            vals.append(float(e[i]))
        shape = (len(self.mons[k - 1]), len(self.mons[k]))
        return sparse.csr_matrix((vals, (rows, cols)), shape=shape)

    @lru_cache(maxsize=None)
    def xmul(self, i, k):
        unit = np.zeros(self.rank)
        unit[i] = 1.0
        return self.linear_mul(unit, k)

    def weyl_map(self, w, k):
        """(target, sign) with (P o w)[target] = sign * P for the signed permutation w."""
        exps = self.mons[k]
        moved = np.zeros_like(exps)
        sign = np.ones(len(exps))
        for i, (p, s) in enumerate(zip(w.perm, w.signs)):
            moved[:, p] += exps[:, i]
            if s < 0:
                sign = sign * np.where(exps[:, i] % 2 == 1, -1.0, 1.0)
        target = np.array([self.index[k][tuple(f)] for f in moved], dtype=int)
        return target, sign

    def compose(self, layer, w, k):
        target, sign = self.weyl_map(w, k)
        out = np.zeros_like(layer)
        out[target] = sign * layer
        return out

    @lru_cache(maxsize=None)
    def reflection_matrix(self, a, k):
        target, sign = self.weyl_map(self.rs.reflection(self.rs.positive_roots[a]), k)
        n = len(self.mons[k])
        return sparse.csr_matrix((sign, (target, np.arange(n))), shape=(n, n))

    def _division(self, a, k):
        """Square triangular block of the 2 alpha multiplication and its LU factors."""
        key = (a, k)
        with self._lock:
            if key in self._lu:
                return self._lu[key]
        root = self.rs.positive_roots[a]
        pivot = max(i for i, c in enumerate(root.coeffs) if c != 0)
        mul = self.root_mul(a, k - 1)
        rows = []
        for e in self.mons[k - 1]:
            f = e.copy()
            f[pivot] += 1
            rows.append(self.index[k][tuple(f)])
        block = sparse.csc_matrix(mul[rows, :])
        entry = (np.array(rows, dtype=int), splu(block), mul)
        with self._lock:
            self._lu[key] = entry
        return entry

    def divide(self, q, a, k):
        """Exact quotient of the layer-k polynomial q by 2 alpha(x), a layer k - 1 polynomial."""
        if k == 0:
            if abs(q[0]) > config.CONSISTENCY_TOL:
                raise DivisionNotExact("Nonzero constant is not divisible by a root",
                                       root=self.rs.positive_roots[a].label(), degree=k)
            return np.zeros(0, dtype=complex)
        rows, lu, mul = self._division(a, k)
        rhs = q[rows]
        d = lu.solve(rhs.real.copy()) + 1j * lu.solve(rhs.imag.copy())
        residual = np.max(np.abs(mul @ d - q), initial=0.0)
        if residual > config.CONSISTENCY_TOL * (1.0 + np.max(np.abs(q), initial=0.0)):
            raise DivisionNotExact(f"Layer {k} is not divisible by 2 alpha for alpha = "
                                   f"{self.rs.positive_roots[a].label()}",
                                   root=self.rs.positive_roots[a].label(), degree=k,
                                   residual=float(residual))
        return d

    def difference_quotient(self, p, a, k):
        """D_alpha p = (p - p o r_alpha) / (2 alpha), layer k -> k - 1."""
        return self.divide(p - self.reflection_matrix(a, k) @ p, a, k)


@lru_cache(maxsize=8)
def _algebra(rs, degree):
    logger.debug("Building layer algebra for %r up to degree %d", rs, degree)
    return _LayerAlgebra(rs, degree)


# --- Taylor polynomials ---
@dataclass(frozen=True)
class TaylorPoly:
    rank: int
    degree: int
    layers: tuple
    kind: str = 'G'
    lam: tuple = ()
    m: object = None
    # largest relative residual of a layer solved by least squares
    solve_residual: float = 0.0

    def layer(self, k):
        """Layer k as a map monomial exponent -> coefficient."""
        return dict(zip(monomials(self.rank, k), self.layers[k]))

    def coefficient(self, exponent):
        exponent = tuple(int(e) for e in exponent)
        k = sum(exponent)
        if k > self.degree:
            return 0.0 + 0.0j
        return self.layer(k).get(exponent, 0.0 + 0.0j)


@dataclass(frozen=True)
class TaylorValue:
    value: complex
    error: float
    method: str = 'taylor'


def g_taylor(rs, m, lam, degree=config.TAYLOR_DEGREE):
    """Taylor polynomial of G_lambda(m) at 0, solved layer by layer."""
    check_degree(rs.rank, degree)
    lam = np.asarray(lam, dtype=complex)
    alg = _algebra(rs, degree)
    roots = rs.positive_roots
    mults = [complex(mult_of(m, a)) for a in roots]
    active = [a for a, mu in enumerate(mults) if mu != 0]
    shift = lam + rho(rs, m)
    kernel = bern_kernel_coeffs(max(degree, 1))
    layers = [np.ones(1, dtype=complex)]
    solve_residual = 0.0
    # quotients[a][j] = D_alpha G_j, a layer j - 1 polynomial
    quotients = {a: [None] for a in active}
    for k in range(degree):
        n_next = len(alg.mons[k + 1])
        pieces = {}
        for a in active:
            acc = None
            for n in range(k, 0, -1):
                term = kernel[n] * quotients[a][k + 1 - n]
                acc = term if acc is None else alg.root_mul(a, k - n - 1) @ acc + term
            pieces[a] = np.zeros(len(alg.mons[k]), dtype=complex) if acc is None \
                else alg.root_mul(a, k - 1) @ acc
        q = []
        for i in range(rs.rank):
            qi = shift[i] * layers[k]
            for a in active:
                c = roots[a].coeffs[i]
                if c:
                    qi = qi - mults[a] * c * pieces[a]
            q.append(qi)
        rhs = sum(alg.xmul(i, k) @ q[i] for i in range(rs.rank))
        system = sparse.identity(n_next, format='csr', dtype=complex) * (k + 1)
        eye = sparse.identity(n_next, format='csr')
        for a in active:
            system = system + (mults[a] / 2) * (eye - alg.reflection_matrix(a, k + 1))
        p, residual = _solve(system.tocsc(), rhs, k + 1)
        solve_residual = max(solve_residual, residual)
        for a in active:
            quotients[a].append(alg.difference_quotient(p, a, k + 1))
        _check_layer(alg, rs, roots, mults, active, quotients, p, q, k)
        layers.append(p)
    logger.debug("G Taylor polynomial of degree %d built for lambda=%s", degree, lam)
    return TaylorPoly(rs.rank, degree, tuple(layers), 'G', tuple(lam), m, solve_residual)


def _solve(system, rhs, degree):
    """Layer coefficients and the relative residual of the solve (0 for a direct solve)."""
    with np.errstate(all='ignore'):
        p = spsolve(system, rhs)
    if np.all(np.isfinite(p)):
        return np.asarray(p, dtype=complex), 0.0
    dense = system.toarray()
    p = np.linalg.lstsq(dense, rhs, rcond=None)[0]
    residual = float(np.linalg.norm(dense @ p - rhs) / max(np.linalg.norm(rhs), 1e-300))
    logger.warning("Singular layer system at degree %d; least squares residual %.3g", degree, residual)
    return np.asarray(p, dtype=complex), residual


def _check_layer(alg, rs, roots, mults, active, quotients, p, q, k):
    scale = 1.0 + max(np.max(np.abs(qi), initial=0.0) for qi in q)
    for i in range(rs.rank):
        lhs = alg.deriv(i, k + 1) @ p
        for a in active:
            c = roots[a].coeffs[i]
            if c:
                lhs = lhs + mults[a] * c * quotients[a][k + 1]
        mismatch = np.max(np.abs(lhs - q[i]), initial=0.0)
        if mismatch > config.CONSISTENCY_TOL * scale:
            raise InconsistentSystem(f"Derivative d/dx_{i + 1} of layer {k + 1} does not match "
                                     "the eigen-system", direction=i, degree=k + 1,
                                     mismatch=float(mismatch))


def f_taylor(rs, m, lam, degree=config.TAYLOR_DEGREE, g=None):
    """Weyl average of G o w^{-1}, layer by layer."""
    g = g if g is not None else g_taylor(rs, m, lam, degree)
    alg = _algebra(rs, g.degree)
    inverses = [w.inverse() for w in rs.weyl_group]
    layers = []
    for k, layer in enumerate(g.layers):
        total = np.zeros_like(layer)
        for w_inv in inverses:
            total += alg.compose(layer, w_inv, k)
        layers.append(total / len(inverses))
    return TaylorPoly(g.rank, g.degree, tuple(layers), 'F', g.lam, g.m, g.solve_residual)


def compose_weyl(rs, p, w):
    """The polynomial x -> p(w x)."""
    alg = _algebra(rs, p.degree)
    layers = tuple(alg.compose(layer, w, k) for k, layer in enumerate(p.layers))
    return TaylorPoly(p.rank, p.degree, layers, p.kind, p.lam, p.m, p.solve_residual)


def layer_values(p, x):
    x = np.asarray(x, dtype=float)
    out = []
    for k, layer in enumerate(p.layers):
        exps = np.array(monomials(p.rank, k), dtype=int).reshape(-1, p.rank)
        out.append(complex(layer @ np.prod(x ** exps, axis=1)))
    return np.array(out)


def eval_taylor(p, x, radius=config.TRUST_RADIUS, strict=False):
    """Layered evaluation with a remainder estimate from the decay of the last layers."""
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm > radius:
        if strict:
            raise OutsideTrustRadius(f"|x| = {norm:.4g} exceeds the trust radius {radius}",
                                     x=list(x), radius=radius)
        logger.warning("Taylor evaluation at |x| = %.4g outside the trust radius %.4g", norm, radius)
    values = layer_values(p, x)
    total = complex(values.sum())
    mags = np.abs(values)
    # rounding plus whatever a least squares layer solve left unresolved
    floor = (1e-15 + p.solve_residual) * float(mags.sum())
    if p.degree < 3:
        return TaylorValue(total, float(mags[-1]) + floor)
    t = max(mags[-1], mags[-2])
    s = max(mags[-3], mags[-4])
    if t <= floor:
        return TaylorValue(total, t + floor)
    q = 0.99 if s == 0 or t >= s else min(np.sqrt(t / s), 0.99)
    return TaylorValue(total, float(t / (1.0 - q) + floor))


# --- Polynomial cache ---
_poly_cache = OrderedDict()
_poly_lock = Lock()
_CACHE_SIZE = 64


def get_g_taylor(rs, m, lam, degree=config.TAYLOR_DEGREE):
    """Shared G Taylor polynomial for (m, lambda, degree), built on first use."""
    return _cached_poly('G', rs, m, lam, degree)


def get_f_taylor(rs, m, lam, degree=config.TAYLOR_DEGREE):
    return _cached_poly('F', rs, m, lam, degree)


def _cached_poly(kind, rs, m, lam, degree):
    lam = np.asarray(lam, dtype=complex)
    key = (kind, rs.rank, m.as_tuple(), tuple(np.round(lam, 14)), int(degree))
    with _poly_lock:
        poly = _poly_cache.get(key)
        if poly is not None:
            _poly_cache.move_to_end(key)
            return poly
    if kind == 'G':
        poly = g_taylor(rs, m, lam, degree)
    else:
        poly = f_taylor(rs, m, lam, degree, g=get_g_taylor(rs, m, lam, degree))
    with _poly_lock:
        _poly_cache[key] = poly
        while len(_poly_cache) > _CACHE_SIZE:
            _poly_cache.popitem(last=False)
    return poly
