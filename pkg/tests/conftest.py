"""Session timing: the acceptance budget for the whole suite lives here.

The per-criterion checks are in test_acceptance.py; the one thing a test
cannot measure is the wall time of the entire run, so that line is printed
(and enforced) when the session finishes.
"""

import time

SUITE_BUDGET_SECONDS = 300.0


def pytest_sessionstart(session):
    session.config._suite_t0 = time.monotonic()


def pytest_sessionfinish(session, exitstatus):
    t0 = getattr(session.config, "_suite_t0", None)
    if t0 is None:
        return
    elapsed = time.monotonic() - t0
    ok = elapsed < SUITE_BUDGET_SECONDS
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion 13: full suite wall "
          f"time {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)")
    if not ok and exitstatus == 0:
        session.exitstatus = 1
