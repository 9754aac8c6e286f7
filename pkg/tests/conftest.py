import pytest

from fusedlog.designio import published_design

PUBLISHED = [("log", "recursive"), ("antilog", "recursive"), ("log", "flattened"), ("antilog", "flattened")]


@pytest.fixture(params=PUBLISHED, ids=lambda p: f"{p[0]}-{p[1]}")
def published(request):
    return published_design(*request.param)


_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for the acceptance summary."""

    def record(label: str, ok: bool, detail: str = ""):
        _criteria.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
