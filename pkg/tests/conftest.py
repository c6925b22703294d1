ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive or large sampled runs")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
