"""Suite-wide reporting: the end-to-end recovery tests register one
summary line per criterion here, printed after the run so the pass/fail
ledger survives even when individual gates fail."""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("recovery criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
