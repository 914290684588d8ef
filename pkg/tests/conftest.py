import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--expensive", action="store_true", default=False,
        help="also run full-size reference protocols (hours of CPU time)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--expensive"):
        return
    skip = pytest.mark.skip(reason="full-size protocol; run with --expensive")
    for item in items:
        if "expensive" in item.keywords:
            item.add_marker(skip)


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record ``(label, passed, detail)`` for the acceptance summary and return ``passed``."""

    def record(label: str, passed: bool, detail: str) -> bool:
        _ACCEPTANCE.append((label, bool(passed), detail))
        print(f"{label}: {'PASS' if passed else 'FAIL'} ({detail})")
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
