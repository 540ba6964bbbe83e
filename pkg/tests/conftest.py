import pytest

_OUTCOMES: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        xfailed = hasattr(rep, "wasxfail")
        notes = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _OUTCOMES.setdefault(number, []).append((title, rep.passed and not xfailed, xfailed, item.name, notes))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        entries = _OUTCOMES[number]
        title = entries[0][0]
        ok = all(e[1] for e in entries)
        status = "PASS" if ok else "FAIL"
        tr.write_line(f"criterion {number:2d} {status}  {title}")
        for _, passed, xfailed, name, notes in entries:
            tag = "ok" if passed else ("expected failure" if xfailed else "failed")
            tr.write_line(f"      {tag:<16} {name}  {notes}")
