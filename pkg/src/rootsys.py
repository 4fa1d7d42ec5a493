"""Root system of type BC_r, its Weyl group and the positive lattice 2Λ.

Normalization: the long roots are beta_j = 2 e_j in an orthonormal basis, so the
short roots are e_j, the medium roots e_j +- e_i (i < j) and the long roots 2 e_j.
Simple roots are e_1, e_2 - e_1, ..., e_r - e_{r-1}; the closed dominant chamber
is 0 <= x_1 <= ... <= x_r.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from src.errors import RankUnsupported

logger = logging.getLogger(__name__)

MAX_RANK = 8
KINDS = ('short', 'medium', 'long')


@dataclass(frozen=True)
class Root:
    coeffs: tuple
    kind: str
    simple: tuple

    @property
    def vector(self):
        return np.array(self.coeffs, dtype=float)

    @property
    def norm2(self):
        return float(sum(c * c for c in self.coeffs))

    @property
    def height(self):
        return sum(self.simple)

    def __call__(self, x):
        return float(np.dot(self.coeffs, np.asarray(x, dtype=float)))

    def label(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = '-' if c < 0 else ('+' if terms else '')
            mag = '' if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}e{i + 1}")
        return ''.join(terms)


@dataclass(frozen=True)
class WeylElem:
    """Signed permutation acting by (w x)_i = signs[i] * x[perm[i]]."""
    perm: tuple
    signs: tuple

    @classmethod
    def identity(cls, rank):
        return cls(tuple(range(rank)), (1,) * rank)

    def apply(self, x):
        x = np.asarray(x)
        return np.asarray(self.signs) * x[list(self.perm)]

    def compose(self, other):
        """self o other."""
        p1 = self.perm
        perm = tuple(other.perm[p1[i]] for i in range(len(p1)))
        signs = tuple(self.signs[i] * other.signs[p1[i]] for i in range(len(p1)))
        return WeylElem(perm, signs)

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return WeylElem(tuple(inv), tuple(self.signs[inv[j]] for j in range(len(inv))))

    def matrix(self):
        r = len(self.perm)
        mat = np.zeros((r, r))
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            mat[i, p] = s
        return mat


class RootSystem:
    def __init__(self, rank):
        self.rank = rank
        self.simple_roots = np.zeros((rank, rank))
        self.simple_roots[0, 0] = 1.0
        for k in range(1, rank):
            self.simple_roots[k, k] = 1.0
            self.simple_roots[k, k - 1] = -1.0
        self.positive_roots = tuple(self._enumerate())
        logger.debug("Built BC_%d with %d positive roots", rank, len(self.positive_roots))

    def _root(self, coeffs, kind):
        vec = np.array(coeffs, dtype=float)
        simple = np.rint(np.linalg.solve(self.simple_roots.T, vec)).astype(int)
        return Root(tuple(int(c) for c in coeffs), kind, tuple(int(c) for c in simple))

    def _enumerate(self):
        r = self.rank
        for j in range(r):
            e = [0] * r
            e[j] = 1
            yield self._root(e, 'short')
        for j in range(r):
            for i in range(j):
                for sign in (-1, 1):
                    v = [0] * r
                    v[j] = 1
                    v[i] = sign
                    yield self._root(v, 'medium')
        for j in range(r):
            v = [0] * r
            v[j] = 2
            yield self._root(v, 'long')

    def roots_of_kind(self, kind):
        return [a for a in self.positive_roots if a.kind == kind]

    @property
    def indivisible_roots(self):
        return [a for a in self.positive_roots if a.kind != 'long']

    @property
    def long_roots(self):
        return self.roots_of_kind('long')

    @cached_property
    def weyl_group(self):
        elems = []
        for perm in itertools.permutations(range(self.rank)):
            for signs in itertools.product((1, -1), repeat=self.rank):
                elems.append(WeylElem(tuple(perm), tuple(signs)))
        return tuple(elems)

    @property
    def weyl_order(self):
        return 2 ** self.rank * _factorial(self.rank)

    def reflection(self, root):
        """r_alpha as a signed permutation."""
        r = self.rank
        perm = list(range(r))
        signs = [1] * r
        nz = [i for i, c in enumerate(root.coeffs) if c != 0]
        if root.kind in ('short', 'long'):
            signs[nz[0]] = -1
        else:
            i, j = nz
            perm[i], perm[j] = j, i
            if root.coeffs[i] == root.coeffs[j]:
                signs[i] = signs[j] = -1
        return WeylElem(tuple(perm), tuple(signs))

    def simple_coordinates(self, v):
        """Coefficients of v in the simple-root basis."""
        return np.linalg.solve(self.simple_roots.T, np.asarray(v))

    def chamber_margin(self, x):
        """min over simple alpha of alpha(x); positive inside the open chamber."""
        return float(np.min(self.simple_values(x)))

    def simple_values(self, x):
        x = np.asarray(x, dtype=float)
        return self.simple_roots @ x

    def lattice_vector(self, n):
        """mu = sum_i n_i * 2 alpha_i in orthonormal coordinates."""
        return 2.0 * np.asarray(n, dtype=float) @ self.simple_roots

    def __repr__(self):
        return f"RootSystem(BC_{self.rank})"


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


@lru_cache(maxsize=None)
def build_bc(rank):
    if not isinstance(rank, (int, np.integer)) or not 1 <= rank <= MAX_RANK:
        raise RankUnsupported(f"Rank must be an integer in [1, {MAX_RANK}], got {rank!r}", rank=rank)
    return RootSystem(int(rank))


def pairing(lam, mu):
    """Bilinear (not Hermitian) extension of the Euclidean inner product."""
    return np.dot(np.asarray(lam), np.asarray(mu))


def coroot_value(lam, root):
    """lambda_alpha = <lambda, alpha> / <alpha, alpha>."""
    return pairing(lam, root.vector) / root.norm2


def mult_of(m, root):
    return {'short': m.m_s, 'medium': m.m_m, 'long': m.m_l}[root.kind]


def rho(rs, m):
    """rho(m) = 1/2 sum of m_alpha alpha over the positive roots."""
    total = np.zeros(rs.rank, dtype=complex if _is_complex_mult(m) else float)
    for root in rs.positive_roots:
        total = total + mult_of(m, root) * root.vector
    return total / 2.0


def _is_complex_mult(m):
    return any(isinstance(v, complex) for v in (m.m_s, m.m_m, m.m_l))


def dominant_representative(rs, x):
    """Returns (x_plus, w) with w.x = x_plus in 0 <= x_1 <= ... <= x_r.

    Ties keep their original order and zero coordinates keep their sign, which
    selects the shortest element among the candidates.
    """
    x = np.real(np.asarray(x, dtype=complex)).astype(float)
    if x.shape != (rs.rank,):
        raise ValueError(f"Expected a point of length {rs.rank}, got shape {x.shape}")
    order = np.argsort(np.abs(x), kind='stable')
    signs = tuple(-1 if x[p] < 0 else 1 for p in order)
    w = WeylElem(tuple(int(p) for p in order), signs)
    return w.apply(x), w


def lattice_shells(rs, max_height):
    """Lattice points of 2Λ with height <= max_height as simple-root coordinates (n_1, ..., n_r).

    Ordered by height, then lexicographically descending within a height, so that
    2 alpha_1 = (1, 0, ...) precedes 2 alpha_2 = (0, 1, ...).
    """
    if max_height < 0:
        raise ValueError("max_height must be >= 0")
    return list(_lattice_points(rs.rank, int(max_height)))


@lru_cache(maxsize=32)
def _lattice_points(rank, max_height):
    points = []
    for h in range(max_height + 1):
        points.extend(_compositions(rank, h))
    return tuple(points)


def _compositions(rank, total):
    if rank == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(rank - 1, total - first):
            out.append((first,) + rest)
    return out
