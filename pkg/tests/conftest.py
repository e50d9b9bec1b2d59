import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def report():
    def _report(n: int, title: str, ok: bool, detail: str = ""):
        ACCEPTANCE[n] = (title, bool(ok), detail)
        print(f"criterion {n:>2} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
