import numpy as np
import pytest

from cauchyprop import sparse_exp


@pytest.fixture
def rng():
    return np.random.default_rng(20141124)


@pytest.fixture
def check_branches(monkeypatch):
    """Turn on the all-branches assertion inside the kernel."""
    monkeypatch.setattr(sparse_exp, "CHECK_BRANCHES", True)
