from __future__ import annotations


def pytest_terminal_summary(terminalreporter):
    from . import acceptance

    lines = acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
