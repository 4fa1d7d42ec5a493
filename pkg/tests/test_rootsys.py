import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import RankUnsupported
from src.multiplicity import Mult
from src.rootsys import WeylElem, build_bc, dominant_representative, lattice_shells, pairing, rho


@pytest.mark.parametrize('rank', [1, 2, 3, 4])
def test_positive_root_count(rank):
    rs = build_bc(rank)
    kinds = [a.kind for a in rs.positive_roots]
    assert len(rs.positive_roots) == rank * rank + rank
    assert kinds.count('short') == rank
    assert kinds.count('medium') == rank * (rank - 1)
    assert kinds.count('long') == rank


def test_rank_one_roots(rs1):
    assert [a.coeffs for a in rs1.positive_roots] == [(1,), (2,)]
    assert rs1.roots_of_kind('medium') == []


def test_long_roots_orthogonal(rs3):
    vecs = np.array([a.vector for a in rs3.long_roots])
    assert_allclose(vecs @ vecs.T, 4.0 * np.eye(3))


@pytest.mark.parametrize('rank', [1, 2, 3])
def test_roots_are_nonnegative_simple_combinations(rank):
    rs = build_bc(rank)
    for a in rs.positive_roots:
        coords = rs.simple_coordinates(a.vector)
        assert np.all(coords >= -1e-12)
        assert_allclose(coords, np.rint(coords), atol=1e-12)
        assert a.height == int(round(coords.sum()))


def test_weyl_order(rs2, rs3):
    assert rs2.weyl_order == 8
    assert len(rs2.weyl_group) == 8
    assert len(rs3.weyl_group) == rs3.weyl_order == 48


@pytest.mark.parametrize('rank', [1, 2, 3])
def test_weyl_group_permutes_roots(rank):
    rs = build_bc(rank)
    roots = {a.coeffs for a in rs.positive_roots}
    for w in rs.weyl_group:
        for a in rs.positive_roots:
            image = tuple(int(v) for v in w.apply(a.vector))
            assert image in roots or tuple(-v for v in image) in roots


def test_weyl_group_is_orthogonal(rs3):
    rng = np.random.default_rng(0)
    lam, mu = rng.normal(size=3), rng.normal(size=3)
    for w in rs3.weyl_group:
        assert_allclose(pairing(w.apply(lam), w.apply(mu)), pairing(lam, mu))
        assert_allclose(w.matrix() @ lam, w.apply(lam))


def test_compose_and_inverse(rs3):
    ident = WeylElem.identity(3)
    x = np.array([0.3, -1.2, 2.5])
    for w in rs3.weyl_group[::5]:
        assert w.compose(w.inverse()) == ident
        for v in rs3.weyl_group[::7]:
            assert_allclose(w.compose(v).apply(x), w.apply(v.apply(x)))


def test_reflections(rs2):
    for a in rs2.positive_roots:
        r = rs2.reflection(a)
        assert_allclose(r.apply(a.vector), -a.vector)
        assert r.compose(r) == WeylElem.identity(2)


def test_rho_examples(rs1, rs2):
    assert_allclose(rho(rs2, Mult(2, 1, 1)), [2.0, 3.0])
    assert_allclose(rho(rs1, Mult(0, 5, 1)), [1.0])
    assert_allclose(rho(rs2, Mult(0, 0, 0)), [0.0, 0.0])


def test_rho_coordinate_formula(rs3):
    m = Mult(3.0, 2.0, 1.0)
    expected = [m.m_s / 2 + m.m_l + j * m.m_m for j in range(3)]
    assert_allclose(rho(rs3, m), expected)


def test_dominant_representative(rs2):
    x_plus, w = dominant_representative(rs2, [3.0, -1.0])
    assert_allclose(x_plus, [1.0, 3.0])
    assert_allclose(w.apply([3.0, -1.0]), x_plus)
    for point in ([0.0, 0.0], [2.0, 2.0]):
        x_plus, w = dominant_representative(rs2, point)
        assert_allclose(x_plus, point)
        assert w == WeylElem.identity(2)


def test_dominant_representative_is_orbit_constant(rs3):
    x = np.array([0.7, -2.1, 1.4])
    base, _ = dominant_representative(rs3, x)
    for w in rs3.weyl_group:
        assert_allclose(dominant_representative(rs3, w.apply(x))[0], base)
    assert_allclose(dominant_representative(rs3, base)[0], base)


def test_lattice_shells(rs1, rs2):
    assert lattice_shells(rs1, 0) == [(0,)]
    assert lattice_shells(rs1, 2) == [(0,), (1,), (2,)]
    assert lattice_shells(rs2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert lattice_shells(rs2, 2)[3:] == [(2, 0), (1, 1), (0, 2)]
    assert_allclose(rs1.lattice_vector((1,)), [2.0])


@pytest.mark.parametrize('rank', [0, 9, 1.5])
def test_rank_out_of_range(rank):
    with pytest.raises(RankUnsupported):
        build_bc(rank)
