import os
import sys
from pathlib import Path

import pytest

from netcoop import kernels
from netcoop.graph import Graph

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []

DATA = Path(__file__).resolve().parents[1] / "src" / "netcoop" / "datasets"


def dataset(name: str) -> Path:
    """Bundled dataset path; ``NETCOOP_DATA`` may point at a directory with extra files."""
    extra = os.environ.get("NETCOOP_DATA")
    for root in ([Path(extra)] if extra else []) + [DATA]:
        if (root / name).exists():
            return root / name
    return DATA / name


BACKENDS = [pytest.param(kernels.python_backend, id="python")]
if kernels.compiled_backend is not None:
    BACKENDS.append(pytest.param(kernels.compiled_backend, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Route netcoop.kernels through each available backend in turn."""
    mod = request.param
    for name in ("accumulate_payoffs", "imitate", "brandes", "distance_sums"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return mod


@pytest.fixture
def triangle():
    return Graph(3, ((0, 1), (1, 2), (2, 0)))


@pytest.fixture
def path3():
    return Graph(3, ((0, 1), (1, 2)))


@pytest.fixture
def path4():
    return Graph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def star4():
    """Centre 0 with leaves 1, 2, 3."""
    return Graph(4, ((0, 1), (0, 2), (0, 3)))


@pytest.fixture
def k4():
    return Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture
def bowtie():
    """Two triangles sharing node 2."""
    return Graph(5, ((0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
