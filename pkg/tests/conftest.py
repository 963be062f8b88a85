import pytest

from fairform.ingestion import load_epscor_states, load_gdp_table

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it.

    Lines are echoed again in the terminal summary so they are visible even
    when pytest captures passing-test output.
    """

    def record(num: int, passed: bool, detail: str) -> None:
        line = f"criterion {num}: {'PASS' if passed else 'FAIL'} - {detail}"
        _acceptance_lines.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def gdp_table():
    return load_gdp_table(None)


@pytest.fixture(scope="session")
def epscor_states():
    return load_epscor_states(None)
