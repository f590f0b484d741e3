import json
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from gameforms import GameForm
from gameforms.cli import form_from_document

FIXTURES = Path(str(resources.files("gameforms"))) / "fixtures"
DATA = Path(__file__).parent / "data"


def load_fixture(name: str) -> GameForm:
    return form_from_document(json.loads((FIXTURES / name).read_text()))


def fixture_names() -> list[str]:
    return sorted(p.name for p in FIXTURES.glob("*.json"))


def random_form(
    rng: np.random.Generator,
    max_players: int = 3,
    max_extent: int = 4,
    max_outcomes: int = 4,
    undefined_rate: float = 0.0,
) -> GameForm:
    n = int(rng.integers(2, max_players + 1))
    dims = tuple(int(rng.integers(1, max_extent + 1)) for _ in range(n))
    k = int(rng.integers(1, max_outcomes + 1))
    p = int(np.prod(dims))
    cells = rng.integers(0, k, size=p, dtype=np.int32)
    if undefined_rate > 0:
        cells[rng.random(p) < undefined_rate] = -1
    return GameForm(dims, tuple(f"o{i + 1}" for i in range(k)), cells)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)
