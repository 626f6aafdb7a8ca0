import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def acceptance_record(request):
    """Record one acceptance line; the test's outcome decides PASS/FAIL."""
    key = request.node.nodeid

    def record(label: str, detail: str) -> None:
        _ACCEPTANCE[key] = f"{label}: {detail}"

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.nodeid in _ACCEPTANCE:
        item.config._acceptance = getattr(item.config, "_acceptance", [])
        flag = "PASS" if rep.passed else "FAIL"
        item.config._acceptance.append(f"[{flag}] {_ACCEPTANCE[item.nodeid]}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("#")[1].split(" ")[0])):
            terminalreporter.write_line(line)
