"""Shared test helpers."""

from __future__ import annotations

import numpy as np
import pytest

from sumsetlab.sampling import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240817)


def random_support(rng: np.random.Generator, order: int, size: int) -> np.ndarray:
    size = max(1, min(order, size))
    return np.sort(rng.choice(order, size=size, replace=False))
