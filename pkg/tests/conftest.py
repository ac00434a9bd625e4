import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    details = []
    yield details.append
    outcome = getattr(request.node, "_call_outcome", None)
    status = "PASS" if outcome is not None and outcome.passed else "FAIL"
    ACCEPTANCE_LINES.append(f"{status}  {label}" + (f"  [{'; '.join(details)}]" if details else ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item._call_outcome = report


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
