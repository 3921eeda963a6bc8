import numpy as np
import pytest

from ftlestream import FlowMap, SimplicialMesh
from ftlestream.generate import grid_mesh, random_mesh


@pytest.fixture
def unit_square():
    coords = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    faces = np.array([[0, 1, 2], [1, 3, 2]])
    return SimplicialMesh(coords, faces)


@pytest.fixture
def grid5():
    return grid_mesh(2, 5)


@pytest.fixture
def grid3d():
    return grid_mesh(3, 4)


def make_random(seed, dim, n):
    rng = np.random.default_rng(seed)
    m = random_mesh(dim, n, rng)
    fm = FlowMap(rng.normal(size=m.coords.shape), t_horizon=rng.uniform(0.5, 3.0))
    return m, fm


def interior_mask(mesh, side):
    idx = np.rint(mesh.coords).astype(int)
    return ((idx > 0) & (idx < side - 1)).all(axis=1)


# -- acceptance summary: one line per criterion ----------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    num, title = marker.args
    ok_so_far = _CRITERIA.get(num, (title, True))[1]
    _CRITERIA[num] = (title, ok_so_far and rep.passed)

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title}")
