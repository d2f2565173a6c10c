import _acceptance


def pytest_terminal_summary(terminalreporter):
    if not _acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance.RESULTS):
        passed, detail = _acceptance.RESULTS[number]
        terminalreporter.write_line(
            f"ACCEPTANCE {number:>2}: {'PASS' if passed else 'FAIL'} - {detail}")
