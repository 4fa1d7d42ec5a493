import json

import numpy as np
import pytest

from src import config
from src.errors import CFunctionPole, ConfigError, HogeomError, MethodUnavailable, jsonable


def test_thread_count(monkeypatch):
    monkeypatch.setenv('HOGEOM_THREADS', '3')
    assert config.thread_count() == 3
    monkeypatch.delenv('HOGEOM_THREADS')
    assert config.thread_count() >= 1
    for bad in ('0', 'four'):
        monkeypatch.setenv('HOGEOM_THREADS', bad)
        with pytest.raises(ConfigError):
            config.thread_count()


def test_load_job_config(tmp_path):
    path = tmp_path / 'job.json'
    path.write_text(json.dumps({'m': [2, 1, 1]}))
    assert config.load_job_config(str(path)) == {'m': [2, 1, 1], 'schema_version': 1}
    path.write_text(json.dumps({'schema_version': 2}))
    with pytest.raises(ConfigError):
        config.load_job_config(str(path))
    path.write_text('[1, 2]')
    with pytest.raises(ConfigError):
        config.load_job_config(str(path))
    path.write_text('{')
    with pytest.raises(ConfigError):
        config.load_job_config(str(path))
    with pytest.raises(ConfigError):
        config.load_job_config(str(tmp_path / 'missing.json'))


def test_setup_logging():
    config.setup_logging('info')
    with pytest.raises(ConfigError):
        config.setup_logging('chatty')
    config.setup_logging('WARNING')


def test_error_payloads():
    err = CFunctionPole("pole", kind='numerator', lam=[1 + 2j])
    assert err.exit_code == 3
    assert err.to_dict() == {'status': 'error', 'code': 'c_function_pole', 'message': 'pole',
                             'details': {'kind': 'numerator', 'lam': [{'re': 1.0, 'im': 2.0}]}}
    assert MethodUnavailable("no").exit_code == 2
    assert isinstance(MethodUnavailable("no"), ConfigError)
    assert HogeomError("x").code == 'numerical_error'


def test_jsonable():
    assert jsonable({1: (np.float64(0.5), None)}) == {'1': [0.5, None]}
    assert jsonable(np.array([1.0, 2.0])) == [1.0, 2.0]
