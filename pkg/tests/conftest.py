import sys
import time

from hypothesis import settings

settings.register_profile("semik", deadline=None, derandomize=True, max_examples=100)
settings.load_profile("semik")


def pytest_sessionstart(session):
    session.config._semik_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    lines = mod.summary_lines()
    elapsed = time.perf_counter() - config._semik_start
    failed = len(terminalreporter.stats.get("failed", [])) + len(terminalreporter.stats.get("error", []))
    if 10 in mod.RESULTS:
        ok = mod.RESULTS[10][0] and failed == 0 and elapsed < 300
        lines[-1] = (f"criterion 10: {'PASS' if ok else 'FAIL'}  full suite green in {elapsed:.1f}s "
                     f"(budget 300s), {failed} failures, verdicts deterministic")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
