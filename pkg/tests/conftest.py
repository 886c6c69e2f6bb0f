import pytest

_criteria: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    rec = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        rec["seen"] = True
        if call.excinfo is not None:
            rec["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        rec = _criteria[number]
        status = "PASS" if rec["ok"] and rec["seen"] else "FAIL"
        terminalreporter.write_line(f"AC{number:<3d}{status}  {rec['title']}")


@pytest.fixture
def rng():
    import random

    return random.Random(20240611)
