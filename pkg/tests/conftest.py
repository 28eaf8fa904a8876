import pytest

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def report_line(request):
    """Record one pass/fail line for the acceptance summary."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def emit(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  [{criterion}] {detail}"
        lines.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
