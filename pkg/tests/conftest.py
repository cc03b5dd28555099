import itertools

import pytest

from acceptance_log import RESULTS
from allswitch import circuit as circ
from allswitch.construction import build

CIRCUITS = {
    "identity": circ.identity(2),
    "set_bit_1": circ.set_bit(2, 1),
    "set_bit_2": circ.set_bit(2, 2),
    "increment": circ.increment(2),
}
INPUTS = list(itertools.product((0, 1), repeat=2))


@pytest.fixture(scope="session")
def constructed():
    """(name, B) -> BitSwitch gadget game watching output bit 1."""
    return {(name, B): build(circ.prepare(F), B, 1) for name, F in CIRCUITS.items() for B in INPUTS}


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
