import pytest

from covselect.parser import parse

WHILE_EXAMPLE = "while ((x--) > 0) { aux = a[0]; a[0] = aux + x; }"


@pytest.fixture
def while_program():
    return parse("input x, a[];\n" + WHILE_EXAMPLE)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
