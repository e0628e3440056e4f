import os
import sys

from hypothesis import HealthCheck, settings

# fixed seed: derandomized example generation, recorded in the ledger
HYPOTHESIS_SEED = 20240611

settings.register_profile(
    "pb",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "pb"))

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for msg in LINES:
            terminalreporter.write_line(msg)
