"""Shared pytest plumbing: collection of acceptance check lines.

The acceptance module records one line per criterion through
:func:`record_criterion`; the hook below prints them in a block at the end
of the run so the verdicts are visible even when pytest output is terse.
"""

ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance checks")
    for name, passed, detail in ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
