import pytest

from frametrack.synth.database import generate_database
from frametrack.synth.simulate import simulate_corpus


@pytest.fixture(scope="session")
def small_db():
    return generate_database(seed=1, n_packages=300)


@pytest.fixture(scope="session")
def big_db():
    return generate_database(seed=1, n_packages=2500)


@pytest.fixture(scope="session")
def small_corpus(big_db):
    return simulate_corpus(big_db, 60, seed=11)


def pytest_runtest_logreport(report):
    # one visible verdict line per acceptance criterion
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        name = report.nodeid.split("::")[-1]
        status = "PASSED" if report.passed else ("SKIPPED" if report.skipped else "FAILED")
        print(f"\n[ACCEPTANCE] {name}: {status}", flush=True)
