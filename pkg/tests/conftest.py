"""Shared fixtures and the acceptance report hook."""
import contextlib
import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@contextlib.contextmanager
def acceptance_line(number, title):
    """Record ``CRITERION n: PASS|FAIL title`` for the terminal summary and stdout."""
    try:
        yield
    except BaseException as exc:
        line = f"CRITERION {number:2d}: FAIL  {title}  ({type(exc).__name__}: {str(exc).splitlines()[0][:160] if str(exc) else ''})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"CRITERION {number:2d}: PASS  {title}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
