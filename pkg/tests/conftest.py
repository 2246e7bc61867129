"""Shared pytest plumbing.

The acceptance module registers one status line per criterion here; the
terminal-summary hook prints them after the run, outside pytest's
capture, so the lines appear even in piped non-verbose runs."""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
