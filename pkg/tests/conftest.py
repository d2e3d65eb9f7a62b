import pytest

from beamcontact import BeamProperties, assemble


@pytest.fixture(scope="session")
def props():
    return BeamProperties()


@pytest.fixture(scope="session")
def sys2(props):
    return assemble(props, 2)


@pytest.fixture(scope="session")
def sys10(props):
    return assemble(props, 10)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
