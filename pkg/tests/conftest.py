import warnings

import numpy as np
import pytest

from driven_pxp.basis import enumerate_basis

warnings.filterwarnings("ignore", message="Omega\\*tau/4")


@pytest.fixture(scope="session")
def basis8():
    return enumerate_basis(8, "periodic")


@pytest.fixture(scope="session")
def basis10():
    return enumerate_basis(10, "periodic")


@pytest.fixture(scope="session")
def basis12():
    return enumerate_basis(12, "periodic")


@pytest.fixture(scope="session")
def basis16():
    return enumerate_basis(16, "periodic")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


_ACCEPTANCE_RESULTS: dict[str, str] = {}


def record_criterion(name: str, outcome: str) -> None:
    _ACCEPTANCE_RESULTS[name] = outcome


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    report = out.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    crit = getattr(item, "_criterion_label", None)
    if crit is None:
        name = item.name
        if name.startswith("test_criterion_"):
            crit = name[len("test_criterion_"):]
    if crit:
        _ACCEPTANCE_RESULTS[crit] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for crit in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[crit]
        terminalreporter.write_line(f"criterion {crit}: {outcome}")
