import pytest

from src import config
from src.multiplicity import Mult
from src.rootsys import build_bc


@pytest.fixture
def rs1():
    return build_bc(1)


@pytest.fixture
def rs2():
    return build_bc(2)


@pytest.fixture
def rs3():
    return build_bc(3)


@pytest.fixture
def m211():
    return Mult(2.0, 1.0, 1.0)


@pytest.fixture
def m441():
    return Mult(4.0, 4.0, 1.0)


@pytest.fixture
def m021():
    return Mult(0.0, 2.0, 1.0)


@pytest.fixture
def run_log(tmp_path, monkeypatch):
    """Points the run history at a temporary file."""
    path = tmp_path / 'suite_logs' / 'suite_logs.json'
    monkeypatch.setattr(config, 'RUN_LOGS_FILE', str(path))
    monkeypatch.setattr(config, 'RUN_LOGS_DIR', str(path.parent))
    return path


@pytest.fixture(autouse=True)
def worker_threads(monkeypatch):
    monkeypatch.setenv('HOGEOM_THREADS', '2')
