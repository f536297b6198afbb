import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import pytest  # noqa: E402

ACCEPTANCE_RESULTS = []


def record_criterion(number, label, passed, note=""):
    ACCEPTANCE_RESULTS.append((number, label, passed, note))


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, passed, note in sorted(ACCEPTANCE_RESULTS, key=lambda r: str(r[0])):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:>3}: {status}  {label}"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line)
