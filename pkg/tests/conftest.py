import test_acceptance


def pytest_terminal_summary(terminalreporter):
    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, detail = results[num]
        terminalreporter.write_line(f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
