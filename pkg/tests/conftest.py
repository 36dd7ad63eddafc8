import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def toy_keys():
    from huncc.cryptosys import mceliece_keygen

    return [mceliece_keygen("toy16", seed) for seed in range(5)]


@pytest.fixture(scope="session")
def classic_keys():
    from huncc.cryptosys import mceliece_keygen

    return mceliece_keygen("classic1024", 1)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(acceptance_log.LINES, key=lambda item: item[0]):
        terminalreporter.write_line(line)
