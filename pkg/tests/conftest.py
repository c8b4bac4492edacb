"""Per-criterion pass/fail lines for the acceptance suite.

Tests in test_acceptance.py carry a `_criterion_label`; after the run the
terminal summary prints one line per criterion with the wall time (setup +
call, so shared fixture work is charged to the first test that triggers it).
"""
import pytest

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    label = getattr(item.function, "_criterion_label", None)
    if label is None:
        return
    entry = _acceptance.setdefault(item.nodeid, {"label": label, "ok": None,
                                                 "seconds": 0.0})
    entry["seconds"] += rep.duration
    if rep.when == "call":
        entry["ok"] = rep.passed
    elif not rep.passed:          # setup error / fixture failure
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for entry in _acceptance.values():
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(
            f"[{status}] {entry['label']} ({entry['seconds']:.1f}s)")
