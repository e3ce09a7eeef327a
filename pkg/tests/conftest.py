import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion: criterion(k, ok, detail)."""

    def record(k, ok, detail):
        ACCEPTANCE[k] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
