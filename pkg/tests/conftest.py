import re

_CRITERIA = {}
_OUTCOMES = {}


def _criterion(item):
    m = re.match(r"test_criterion_(\d+)", getattr(item, "originalname", item.name))
    return int(m.group(1)) if m else None


def pytest_collection_modifyitems(items):
    for item in items:
        n = _criterion(item)
        if n is not None:
            _CRITERIA[item.nodeid] = n
            doc = (item.function.__doc__ or "").strip().splitlines()
            _OUTCOMES.setdefault(n, {"desc": doc[0] if doc else "", "passed": True, "ran": False})


def pytest_runtest_logreport(report):
    n = _CRITERIA.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.failed:
        _OUTCOMES[n]["ran"] = True
        if report.failed:
            _OUTCOMES[n]["passed"] = False


def pytest_terminal_summary(terminalreporter):
    ran = {n: o for n, o in _OUTCOMES.items() if o["ran"]}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ran):
        o = ran[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if o['passed'] else 'FAIL'}  {o['desc']}")
