import pytest

from reflected_ou import run_experiment
from reflected_ou.cli import table1_configs

TABLE1_SEED = 42

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance.append((mark.args[0], mark.args[1], rep.outcome, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, outcome, name in sorted(_acceptance):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {text} ({name})")


class _Table1Cache:
    """Lazily run cells of the table preset (N=1000, seed 42) once per session."""

    def __init__(self):
        self._configs = {(c.params.theta, c.params.sigma, c.grid.n): c
                         for c in table1_configs(1000, TABLE1_SEED)}
        self._results = {}

    def config(self, theta, sigma, n):
        return self._configs[(theta, sigma, n)]

    def __call__(self, theta, sigma, n):
        key = (theta, sigma, n)
        if key not in self._results:
            self._results[key] = run_experiment(self._configs[key])
        return self._results[key]


@pytest.fixture(scope="session")
def table1():
    return _Table1Cache()
