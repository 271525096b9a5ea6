import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> "PASS|FAIL criterion N: detail", filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
