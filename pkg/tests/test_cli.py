import csv
import io
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.cli import join_signed_values, main, parse_grid, parse_lambda, parse_point
from src.errors import ConfigError
from src.multiplicity import Mult
from src.rankone import f_ell_r1


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_helpers():
    m = Mult(2.0, 1.0, 1.0)
    assert parse_lambda('1.5,0.2:-1', m, 2) == (1.5 + 0j, 0.2 - 1j)
    assert parse_lambda('rho', m, 2) == (2 + 0j, 3 + 0j)
    with pytest.raises(ConfigError):
        parse_lambda('rho', m, None)
    with pytest.raises(ConfigError):
        parse_lambda('1,2,3', m, 2)
    with pytest.raises(ConfigError):
        parse_lambda('one', m, 1)
    assert parse_point('0.5,1') == (0.5, 1.0)
    assert_allclose(parse_grid('0:1:5'), [0, 0.25, 0.5, 0.75, 1])
    for bad in ('0:1', '0:1:0', 'a:b:c'):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_eval_rank_one_csv(capsys):
    code, out, _ = run(capsys, 'eval', '--m', '2,1,1', '--ell', '0.5', '--lambda', '1.2:0.3',
                       '--x', '0.4', '--x', '1.5')
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ['x_1', 're', 'im', 'method', 'est_error']
    for row in rows:
        expected = f_ell_r1(Mult(2, 1, 1), 0.5, 1.2 + 0.3j, float(row['x_1']))
        assert_allclose(float(row['re']) + 1j * float(row['im']), expected, rtol=1e-12)
        assert row['method'] == 'rankone'


def test_eval_at_rho_is_one(capsys):
    code, out, _ = run(capsys, 'eval', '--m', '2,1,1', '--lambda', 'rho', '--grid', '0:0.4:3',
                       '--grid', '0.1:0.5:3')
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 9
    for row in rows:
        assert_allclose(float(row['re']), 1.0, rtol=1e-8)
        assert abs(float(row['im'])) < 1e-8


def test_eval_json_and_output_file(capsys, tmp_path):
    path = tmp_path / 'out.json'
    code, out, _ = run(capsys, 'eval', '--m', '2,1,1', '--lambda', '0.7', '--x', '0.3',
                       '--function', 'g', '--json', '--out', str(path))
    assert code == 0 and out == ''
    payload = json.loads(path.read_text())
    assert payload['schema_version'] == 1
    assert payload['function'] == 'g'
    assert payload['results'][0]['x'] == [0.3]


def test_sweep(capsys):
    code, out, _ = run(capsys, 'sweep', '--m', '2,1,1', '--lambda', '0.8', '--x', '1.0',
                       '--ell-grid', '-1:2:4')
    assert code == 0
    rows = read_csv(out)
    assert [float(r['ell']) for r in rows] == [-1.0, 0.0, 1.0, 2.0]
    # F_{ell} = F_{-ell}
    assert_allclose(float(rows[0]['re']), float(rows[2]['re']), rtol=1e-12)


def test_bad_multiplicity(capsys):
    code, out, err = run(capsys, 'eval', '--m', '2,1', '--lambda', '1', '--x', '0.5')
    assert code == 2
    assert out == ''
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload['status'] == 'error'
    assert payload['code'] == 'config_error'


def test_missing_lambda(capsys):
    code, _, err = run(capsys, 'eval', '--m', '2,1,1', '--x', '0.5')
    assert code == 2
    assert '--lambda' in json.loads(err.strip().splitlines()[-1])['message']


def test_long_multiplicity_must_be_one(capsys):
    code, _, err = run(capsys, 'eval', '--m', '2,1,0', '--lambda', '1', '--x', '0.5')
    assert code == 2


def test_negative_values_are_not_options(capsys):
    assert join_signed_values(['regions', '--m', '-3,1,1', '--out', 'f']) == \
        ['regions', '--m=-3,1,1', '--out', 'f']
    assert join_signed_values(['eval', '--m', '--json']) == ['eval', '--m', '--json']
    code, out, _ = run(capsys, 'eval', '--m', '2,1,1', '--ell', '-0.5', '--lambda', '-1.5:0.2',
                       '--x', '-0.4')
    assert code == 0
    row = read_csv(out)[0]
    assert float(row['x_1']) == -0.4
    expected = f_ell_r1(Mult(2, 1, 1), -0.5, -1.5 + 0.2j, 0.4)
    assert_allclose(float(row['re']) + 1j * float(row['im']), expected, rtol=1e-12)


def test_numerical_error_exit_code(capsys):
    code, _, err = run(capsys, 'cfunc', '--m', '2,1,1', '--lambda', '-3')
    assert code == 3
    assert json.loads(err.strip().splitlines()[-1])['code'] == 'c_function_pole'


def test_regions(capsys):
    code, out, _ = run(capsys, 'regions', '--m', '2,1,1')
    assert code == 0
    data = json.loads(out)
    assert data['Mplus'] and data['M1']
    assert data['standardized'] == {'m': [3.0, 1.0, 0.0], 'ell': -0.5, 'ell_range': [-1.5, 1.5]}
    code, out, _ = run(capsys, 'regions', '--m', '-3,1,1')
    assert json.loads(out)['standardized'] is None


def test_cfunc(capsys):
    code, out, _ = run(capsys, 'cfunc', '--m', '0,0,1', '--lambda', '2')
    assert code == 0
    data = json.loads(out)
    assert_allclose(data['c']['re'], 2 / np.pi, rtol=1e-13)
    assert data['rho_singular'] is False


def test_bounded(capsys):
    code, out, _ = run(capsys, 'bounded', '--m', '2,1,1', '--ell', '0.5', '--lambda', '1.0')
    assert code == 0
    data = json.loads(out)
    assert data['verdict'] == 'bounded'
    assert data['in_tube'] and data['agrees']


def test_verify_and_history(capsys, run_log):
    code, out, _ = run(capsys, 'verify', '--suite', 'logistic_weights', '--seed', '4')
    assert code == 0
    data = json.loads(out)
    assert data['passed'] and data['seed'] == 4
    assert data['suites'][0]['suite'] == 'logistic_weights'
    assert 'cpu_count' in data['host']
    run_id = data['run_id']

    _, out, _ = run(capsys, 'history')
    runs = json.loads(out)
    assert runs[0]['id'] == run_id and runs[0]['status'] == 'Pass'

    _, out, _ = run(capsys, 'history', 'show', str(run_id))
    assert out.startswith("Verification Run Details")
    assert "Suite: logistic_weights" in out

    code, out, _ = run(capsys, 'history', 'delete', str(run_id))
    assert code == 0 and json.loads(out)['id'] == run_id
    code, _, _ = run(capsys, 'history', 'show', str(run_id))
    assert code == 2


def test_verify_without_record(capsys, run_log):
    code, out, _ = run(capsys, 'verify', '--suite', 'deformation', '--no-record', '--json')
    assert code == 0
    data = json.loads(out)
    assert data['run_id'] is None
    assert 'results' in data['suites'][0]
    assert not run_log.exists()


def test_unknown_suite(capsys, run_log):
    code, _, err = run(capsys, 'verify', '--suite', 'everything')
    assert code == 2
    assert json.loads(run_log.read_text())[0]['status'] == 'Error'


def test_job_config(capsys, tmp_path):
    job = tmp_path / 'job.json'
    job.write_text(json.dumps({'m': [2, 1, 1], 'lambda': '1.2', 'x': '0.4', 'ell': 0.5}))
    code, out, _ = run(capsys, 'eval', '--config', str(job))
    assert code == 0
    row = read_csv(out)[0]
    assert_allclose(float(row['re']), f_ell_r1(Mult(2, 1, 1), 0.5, 1.2, 0.4).real, rtol=1e-12)
    # flags on the command line win
    code, out, _ = run(capsys, 'eval', '--config', str(job), '--ell', '1.0')
    row = read_csv(out)[0]
    assert_allclose(float(row['re']), f_ell_r1(Mult(2, 1, 1), 1.0, 1.2, 0.4).real, rtol=1e-12)


def test_sysinfo(capsys):
    code, out, _ = run(capsys, 'sysinfo')
    assert code == 0
    data = json.loads(out)
    assert data['workers'] == 2
    assert data['mem_total'] > 0


def test_output_is_deterministic(capsys):
    argv = ('eval', '--m', '4,4,1', '--lambda', '0.4:0.2,1.3', '--grid', '0:0.5:3', '--grid', '0.1:0.6:3')
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
