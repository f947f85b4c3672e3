import pytest

from dpdescent.lattice import PicLattice
from dpdescent.weyl import subgroups_up_to_conjugacy, weyl_group


@pytest.fixture(scope="session")
def survey_classes():
    """Memoised conjugacy-class representatives, keyed by (degree, kind, max_order)."""
    cache = {}

    def get(degree, kind="blowup", max_order=None):
        key = (degree, kind, max_order)
        if key not in cache:
            cache[key] = subgroups_up_to_conjugacy(weyl_group(PicLattice(degree, kind)), max_order)
        return cache[key]

    return get


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
