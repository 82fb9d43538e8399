import pytest

_CRITERIA = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _CRITERIA.append((props["criterion"], report.outcome, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(_CRITERIA, key=lambda r: r[0][0])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), outcome, detail in rows:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2} {mark}  {title}  {detail}".rstrip())


@pytest.fixture
def criterion(record_property):
    """``criterion(n, title)`` tags the test; ``criterion.detail(text)`` adds a note."""

    class Tag:
        def __call__(self, num, title):
            record_property("criterion", (num, title))

        def detail(self, text):
            record_property("detail", text)

    return Tag()
