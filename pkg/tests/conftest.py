from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from orelab.graph import Graph  # noqa: E402
from orelab.ore import K4, h7  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def H7() -> Graph:
    return h7()


@pytest.fixture
def k4() -> Graph:
    return K4


@pytest.fixture
def W5() -> Graph:
    return Graph.wheel(5)


# Every extension record built in this process is checked against ExtForm.
EXTFORM_AUDIT = {"records": 0, "failures": 0, "examples": []}


def _install_extform_audit() -> None:
    import importlib

    pot = importlib.import_module("orelab.potential")

    original = pot._extension_record

    def audited(*args, **kwargs):
        rec = original(*args, **kwargs)
        EXTFORM_AUDIT["records"] += 1
        if not pot.check_extform(rec):
            EXTFORM_AUDIT["failures"] += 1
            if len(EXTFORM_AUDIT["examples"]) < 5:
                EXTFORM_AUDIT["examples"].append(rec.to_json())
        return rec

    pot._extension_record = audited


_install_extform_audit()


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    verdicts = getattr(acc, "VERDICTS", {})
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            terminalreporter.write_line(verdicts[n])
        missing = [n for n in range(1, 11) if n not in verdicts]
        if missing:
            terminalreporter.write_line(f"not run: criteria {missing}")
    terminalreporter.write_line(
        f"ExtForm audit: {EXTFORM_AUDIT['records']} extension records, {EXTFORM_AUDIT['failures']} failures")


def pytest_sessionfinish(session, exitstatus):
    if EXTFORM_AUDIT["failures"] and exitstatus == 0:
        session.exitstatus = 1
