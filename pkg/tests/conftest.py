import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: list[tuple[str, str, str]] = []


@pytest.fixture(scope="session")
def verify_ctx():
    """One verification context per session so expensive intermediate results are shared."""
    from decic.verify import VerifyContext

    return VerifyContext()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        status = "PASS" if report.outcome == "passed" else ("SKIP" if report.outcome == "skipped" else "FAIL")
        _criteria.append((props["criterion"], status, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in sorted(_criteria, key=lambda t: int(t[0].split()[0])):
        line = f"criterion {label}: {status}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
