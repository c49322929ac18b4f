import time

import numpy as np
import pytest
from hypothesis import strategies as st

from stokesbubble.cli import preset_state
from stokesbubble.dynamics import SimConfig, simulate
from stokesbubble.fourier import TrigSeries


@st.composite
def real_series(draw, max_N=10, scale=1.0, min_N=0):
    N = draw(st.integers(min_N, max_N))
    el = st.floats(-scale, scale, allow_nan=False, allow_infinity=False)
    re = draw(st.lists(el, min_size=N + 1, max_size=N + 1))
    im = draw(st.lists(el, min_size=N + 1, max_size=N + 1))
    half = np.array(re) + 1j * np.array(im)
    return TrigSeries.from_nonneg(half)


@st.composite
def small_phi(draw, max_N=8, size=0.05, skip_one=True):
    """Real mean-free phi with F^{0,1} norm at most ``size``."""
    N = draw(st.integers(2, max_N))
    el = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    re = np.array(draw(st.lists(el, min_size=N + 1, max_size=N + 1)))
    im = np.array(draw(st.lists(el, min_size=N + 1, max_size=N + 1)))
    half = re + 1j * im
    half[0] = 0
    if skip_one:
        half[1] = 0
    tot = 2 * np.abs(half).sum()
    if tot < 1e-6:
        half[2] = 1
        tot = 2 * np.abs(half).sum()
    frac = draw(st.floats(0.01, 1.0))
    return TrigSeries.from_nonneg(half * (size * frac / tot))


MODE2_CFG = SimConfig(N=16, m=64, dt=1e-3, t_end=20.0, output_every=100)


@pytest.fixture(scope="session")
def mode2_timed():
    """The mode2_small decay run at the reference settings (shared, ~25 s), with wall time."""
    t0 = time.perf_counter()
    records, state = simulate(preset_state("mode2_small"), MODE2_CFG)
    return records, state, time.perf_counter() - t0


@pytest.fixture(scope="session")
def mode2_run(mode2_timed):
    return mode2_timed[:2]
