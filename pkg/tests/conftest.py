import pytest

from modkit.store import open_store


class SteppingClock:
    """Deterministic clock: every reading advances by a fixed step."""

    def __init__(self, start: float = 1_700_000_000.0, step: float = 1.0):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        value = self.now
        self.now += self.step
        return value

    def advance(self, seconds: float) -> None:
        self.now += seconds


@pytest.fixture
def clock():
    return SteppingClock()


@pytest.fixture
def store(tmp_path, clock):
    s = open_store(tmp_path / "modkit.db", clock=clock)
    yield s
    s.close()


@pytest.fixture
def owner(store):
    return store.ensure_owner("creator")
