import pytest

from trees import NOT_LIKE, HATES, NOT_LIKE_S
from sdep import parse_sform, parse_uform, sample_lexicon


@pytest.fixture
def not_like():
    return parse_uform(NOT_LIKE)


@pytest.fixture
def hates():
    return parse_uform(HATES)


@pytest.fixture
def not_like_s():
    return parse_sform(NOT_LIKE_S)


@pytest.fixture(scope="session")
def lex():
    return sample_lexicon()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
