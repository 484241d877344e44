import pytest

from lambdatrain import build_train, evolve

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def lossless_runs():
    """Optimal trains N = 1..10, Gaussian width 1, spacing 6, dt = 1/2000."""
    runs = {}
    for n in range(1, 11):
        train = build_train(n)
        runs[n] = (train, evolve(train))
    return runs


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
