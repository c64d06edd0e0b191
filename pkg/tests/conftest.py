import sys
from pathlib import Path

import numpy as np
import pytest

from longfair.data import Dataset

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def two_group_dataset():
    """Balanced 40-example dataset with both groups and labels present."""
    rng = np.random.default_rng(17)
    n = 40
    t = np.repeat([0, 1], n // 2)
    y = np.tile([0, 1], n // 2)
    X = rng.standard_normal((n, 3)) + t[:, None] * 0.5
    y_hat = rng.integers(0, 2, size=n)
    i_beta = rng.normal(1.5, 0.8, size=n)
    return Dataset(X, y, t, y_hat, i_beta, L=2, G=2)
