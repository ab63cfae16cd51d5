import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from frobforge.specfile import parse_ring_spec  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def load(name: str):
    return parse_ring_spec((FIXTURES / f"{name}.ring").read_text()).to_ring()


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.ring"


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FROBFORGE_CACHE", str(tmp_path / "cache"))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
