import pytest

from geobatch.batch_code import build_explicit
from geobatch.finite_field import field_new
from geobatch.geometry import certify, construction1


@pytest.fixture(scope="session")
def paper_code():
    """The 27-bit code with directions (1,1,1), (1,2,1), (1,0,0) over GF(3)."""
    return build_explicit(certify(construction1(field_new(3), 1, include_zero_block=True)))


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
