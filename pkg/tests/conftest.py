"""Shared fixtures; collects acceptance verdicts for the terminal summary."""

import pytest

_VERDICTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def verdict():
    """record(label, ok, detail) stores one pass/fail line for the summary."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        _VERDICTS.append((label, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _VERDICTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
