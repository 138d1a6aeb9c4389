import pytest

ACCEPTANCE: list[tuple[str, bool, float, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call ``criterion(name, ok, seconds, detail)``."""
    def record(name: str, ok: bool, seconds: float, detail: str = ""):
        ACCEPTANCE.append((name, ok, seconds, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({seconds:.2f}s) {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, seconds, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({seconds:.2f}s) {detail}")
