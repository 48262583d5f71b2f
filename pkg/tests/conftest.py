"""Shared pytest hooks: the acceptance criteria summary table."""

import re

import _criteria

_NODE = re.compile(r"::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            match = _NODE.search(getattr(report, "nodeid", ""))
            if match:
                number = int(match.group(1))
                if outcomes.get(number) != "FAIL":
                    outcomes[number] = label
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria.CRITERIA):
        label = outcomes.get(number, "NOT RUN")
        detail = _criteria.DETAILS.get(number)
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(
            f"criterion {number:2d}: {label:7s} {_criteria.CRITERIA[number]}{suffix}"
        )
