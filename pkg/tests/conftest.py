from functools import lru_cache

import pytest
from hypothesis import settings

from kanjordan.bimodule import build_V_alpha
from kanjordan.kantor import build_kan
from kanjordan.scalars import FieldContext

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def kan(n: int, field: str = "Q"):
    return build_kan(n, FieldContext.from_name(field))


@lru_cache(maxsize=None)
def valpha(n: int, alpha=0, parity: int = 0, field: str = "Q"):
    ctx = FieldContext.from_name(field)
    return build_V_alpha(n, alpha, parity, ctx, kan(n, field))


@pytest.fixture
def kan2():
    return kan(2)


@pytest.fixture
def kan3():
    return kan(3)


# -- acceptance summary -------------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, list[str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (report.when != "call" and not (report.when == "setup" and report.failed)):
        return
    number, title = mark.args
    entry = _ACCEPTANCE.setdefault(number, (title, []))
    entry[1].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcomes = _ACCEPTANCE[number]
        status = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
