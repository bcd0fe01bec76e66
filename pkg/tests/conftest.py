import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("radokit", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("radokit")

_BUNDLES: dict = {}


@pytest.fixture(scope="session")
def bundle():
    """Build a construction bundle once per parameter set."""
    from radokit.reports import RunConfig, build_bundle

    def get(name, **params):
        key = (name, tuple(sorted(params.items())))
        if key not in _BUNDLES:
            _BUNDLES[key] = build_bundle(name, RunConfig(), **params)
        return _BUNDLES[key]

    return get


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
