import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            label = dict(rep.user_properties).get("criterion")
            if label:
                lines.append((label, outcome))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(lines, key=lambda x: int(x[0].split()[0])):
        terminalreporter.write_line(f"criterion {label}: {'PASS' if outcome == 'passed' else 'FAIL'}")
