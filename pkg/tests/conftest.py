import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from relmod.dsl import parse_presentation
from relmod.words import Word, reduce_syllables

settings.register_profile("relmod", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("relmod")


def words(d: int = 2, max_syllables: int = 8):
    """Strategy for reduced words in d generators."""
    syl = st.tuples(st.integers(0, d - 1), st.integers(-3, 3).filter(bool))
    return st.lists(syl, max_size=max_syllables).map(reduce_syllables)


def pres(text: str, **kw):
    return parse_presentation(text, **kw)


@pytest.fixture
def x():
    return Word.gen(0)


@pytest.fixture
def y():
    return Word.gen(1)


# acceptance criteria outcomes, filled by test_acceptance and printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])
