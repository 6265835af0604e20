import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Register an acceptance criterion line; marked FAIL unless the test finishes."""
    entry = {"name": None, "status": "FAIL", "note": ""}

    def start(name):
        entry["name"] = name
        ACCEPTANCE_LINES.append(entry)
        return entry

    yield start
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        entry["status"] = "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE_LINES:
        note = f"  ({entry['note']})" if entry["note"] else ""
        terminalreporter.write_line(f"{entry['status']:4s}  {entry['name']}{note}")
