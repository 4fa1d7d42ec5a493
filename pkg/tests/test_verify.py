import numpy as np
import pytest

from src.errors import ConfigError
from src.multiplicity import Mult, ell_range
from src.rootsys import build_bc, rho
from src.verify import (SUITES, SuiteConfig, bounded_verdict, brute_force_in_hull, coweight_rays,
                        hull_membership, max_weyl_pairing, run_suite, run_suites, suite_names,
                        weyl_orbit_points)


def test_hull_rank_one():
    assert hull_membership([2.0], [1.5])
    assert hull_membership([2.0], [-2.0])
    assert not hull_membership([2.0], [2.5])


def test_hull_rank_two():
    assert hull_membership([2.0, 3.0], [2.5, 2.5])
    assert hull_membership([2.0, 3.0], [-3.0, 2.0])
    assert not hull_membership([2.0, 3.0], [0.0, 3.5])
    assert not hull_membership([2.0, 3.0], [2.8, 2.8])


def test_orbit_points():
    assert len(weyl_orbit_points([2.0, 3.0])) == 8
    assert len(weyl_orbit_points([1.0, 2.0, 3.0])) == 48


def test_brute_force_agrees():
    rng = np.random.default_rng(7)
    rho_vec = np.array([2.0, 3.0])
    for point in rng.uniform(-4, 4, size=(200, 2)):
        assert hull_membership(rho_vec, point) == brute_force_in_hull(rho_vec, point)


@pytest.mark.parametrize('point, inside', [((2.9, 2.9), False), ((-0.27, 3.337), False),
                                           ((1.5, 2.5), True), ((0.0, 0.0), True)])
def test_brute_force_rejects_outside_points(point, inside):
    assert brute_force_in_hull([2.0, 3.0], point) is inside
    assert hull_membership([2.0, 3.0], point) is inside


def test_max_weyl_pairing():
    assert max_weyl_pairing([1.0, -2.0], [3.0, 0.5]) == 6.5


def test_coweight_rays():
    rays = coweight_rays(2)
    np.testing.assert_allclose(rays[0], [1.0, 1.25])
    np.testing.assert_allclose(rays[1], [0.25, 1.25])


def test_bounded_inside_tube(m211):
    res = bounded_verdict(m211, 0.5, [1.0])
    assert res.in_tube
    assert res.verdict == 'bounded'
    assert res.sup <= 1.0 + 1e-9
    assert res.skipped == 0


def test_unbounded_outside_tube(m211):
    res = bounded_verdict(m211, 0.5, [2.5])
    assert not res.in_tube
    assert res.verdict == 'unbounded'
    assert res.to_dict()['verdict'] == 'unbounded'


def test_suite_config_from_dict():
    cfg = SuiteConfig.from_dict({'seed': 3, 'mults': [[2, 1, 1]], 'ranks': [1], 'unknown': 1})
    assert cfg.seed == 3
    assert cfg.mults == ((2.0, 1.0, 1.0),)
    assert cfg.multiplicities() == [Mult(2.0, 1.0, 1.0)]
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({'ranks': [4]})
    assert SuiteConfig.from_dict(None) == SuiteConfig()


def test_suite_names():
    assert suite_names('all') == list(SUITES)
    assert suite_names('hull') == ['hull']
    with pytest.raises(ConfigError):
        suite_names('nonsense')
    with pytest.raises(ConfigError):
        run_suite('nonsense')


@pytest.mark.parametrize('name', ['logistic_weights', 'deformation', 'hull'])
def test_cheap_suites_pass(name):
    report = run_suite(name, SuiteConfig(seed=1))
    assert report.cases
    assert report.passed, [c.to_dict() for c in report.cases if not c.passed]
    summary = report.summary()
    assert summary['failed'] == 0 and summary['cases'] == len(report.cases)


def test_reports_are_deterministic():
    first = run_suite('hull', SuiteConfig(seed=5)).to_dict()
    second = run_suite('hull', SuiteConfig(seed=5)).to_dict()
    assert first == second


def test_rank_one_boundedness_suite():
    cfg = SuiteConfig(seed=2, mults=((2.0, 1.0, 1.0),), ranks=(1,))
    report = run_suite('boundedness', cfg)
    assert report.passed, [c.to_dict() for c in report.cases if not c.passed]


def test_boundedness_sample_counts():
    cases = SUITES['boundedness'](SuiteConfig(seed=0))
    counts = {}
    for case in cases:
        m, rank, ell = case.params['m'], case.params['rank'], case.params['ell']
        if abs(ell) < ell_range(Mult(*m))[1]:
            counts.setdefault((m, rank), []).append(case.params['lam'])
    assert all(len(lams) >= 40 for lams in counts.values())
    rank_two = [key for key in counts if key[1] == 2]
    assert len(rank_two) >= 2
    for m, rank in rank_two:
        rho_m = rho(build_bc(rank), Mult(*m))
        inside = [hull_membership(rho_m, lam.real) for lam in counts[(m, rank)]]
        assert any(inside) and not all(inside)

@pytest.mark.slow
def test_all_suites_pass():
    reports = run_suites('all', SuiteConfig(seed=0))
    failed = {r.name: r.failed for r in reports if not r.passed}
    assert not failed
