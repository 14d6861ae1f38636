import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.fixture
def measured(request):
    """Dict for an acceptance test to report what it measured."""
    marker = request.node.get_closest_marker("criterion")
    entry = _CRITERIA.setdefault(marker.args[0], {"title": marker.args[1], "detail": {}})
    return entry["detail"]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    entry = _CRITERIA.setdefault(marker.args[0], {"title": marker.args[1], "detail": {}})
    entry["passed"] = rep.passed
    line = _format(marker.args[0], entry)
    entry["line"] = line
    print("\n" + line)


def _format(n, entry):
    status = "PASS" if entry.get("passed") else "FAIL"
    detail = ", ".join(
        f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in entry["detail"].items()
    )
    return f"[{status}] criterion {n:>2}: {entry['title']}" + (f" ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    ran = {n: e for n, e in _CRITERIA.items() if "passed" in e}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ran):
        terminalreporter.write_line(ran[n]["line"])
    passed = sum(e["passed"] for e in ran.values())
    terminalreporter.write_line(f"{passed}/{len(ran)} criteria passed")
