import time
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"
GOLDEN = Path(__file__).resolve().parent / "golden"

FULL_SUITE_BUDGET_S = 60.0

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
_START = time.perf_counter()


@pytest.fixture
def instance_path():
    return lambda name: INSTANCES / f"{name}.json"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    elapsed = time.perf_counter() - _START
    ok = elapsed < FULL_SUITE_BUDGET_S
    tr.write_line(f"full suite runtime: {'PASS' if ok else 'FAIL'}  {elapsed:.1f} s (budget {FULL_SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if ACCEPTANCE and session.testscollected > len(ACCEPTANCE) and exitstatus == 0:
        if time.perf_counter() - _START >= FULL_SUITE_BUDGET_S:
            session.exitstatus = 1
