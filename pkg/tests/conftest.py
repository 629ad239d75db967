import pytest

_criterion_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    info = getattr(getattr(item, "function", None), "criterion_info", None)
    if info is not None:
        _criterion_results.append((info[0], info[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, title, passed in sorted(_criterion_results):
        terminalreporter.write_line(
            "criterion %2d %s: %s" % (num, "PASS" if passed else "FAIL",
                                      title))
