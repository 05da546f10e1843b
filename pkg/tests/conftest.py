"""Shared test plumbing: collect acceptance-criterion verdict lines and
echo them after the run, outside pytest's output capture."""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
