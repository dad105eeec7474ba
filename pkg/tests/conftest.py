import os
import tempfile

import pytest

# one pass/fail line per acceptance criterion, filled in by test_acceptance
CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache():
    # keep the suite away from any cache in the working tree
    from idemlab import cache

    with tempfile.TemporaryDirectory(prefix="idemlab-test-cache-") as d:
        os.environ["IDEMLAB_CACHE"] = d
        cache.set_active_cache(None)
        yield


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
