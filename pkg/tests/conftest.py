_criterion_lines: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> bool:
    verdict = "PASS" if passed else "FAIL"
    _criterion_lines[number] = f"criterion {number:2d}: {verdict}  {detail}"
    return passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criterion_lines):
        terminalreporter.write_line(_criterion_lines[number])
