import numpy as np
import pytest

from erpinfo import GaussianMixture

_CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _CRITERIA.setdefault(props["criterion"], []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", int(m.args[0])))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict = "PASS" if all(o == "passed" for o in _CRITERIA[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}")


def random_spd(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a @ a.T / n + 0.5 * np.eye(n))


def random_mixture(rng, n, k, spread=1.5):
    w = rng.dirichlet(np.ones(k))
    means = spread * rng.standard_normal((k, n))
    covs = [random_spd(rng, n, scale=rng.uniform(0.3, 2.0)) for _ in range(k)]
    return GaussianMixture.from_arrays(w / w.sum(), means, covs)


def fig7(p):
    c1 = np.array([[4.0, 2.0], [2.0, 4.0]])
    c2 = np.array([[5.0 + p, 2.0], [2.0, 5.0 + p]])
    return GaussianMixture.from_arrays([0.5, 0.5], np.zeros((2, 2)), [c1, c2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
