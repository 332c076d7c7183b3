import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twocenter.model import Params


@pytest.fixture
def grav():
    """The canonical attractive instance, strengths (2, 1)."""
    return Params(2.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_scattering_state(rng, params, r_lo=2.5, r_hi=8.0, h_min=0.05):
    """A random positive-energy state clear of both centers."""
    from twocenter.dynamics import eval_integrals
    from twocenter.model import PhaseState

    while True:
        q = rng.normal(0.0, 4.0, 3)
        r = np.linalg.norm(q)
        if not (r_lo < r < r_hi):
            continue
        p = rng.normal(0.0, 1.5, 3)
        s = PhaseState(q, p)
        if eval_integrals(s, params).h > h_min:
            return s
