import pytest

# criterion label -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture
def record():
    def _record(name, ok, detail=""):
        ACCEPTANCE[name] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok
    return _record
