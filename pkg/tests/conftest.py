import numpy as np
import pytest

from rootflow.spectral import PeriodicGrid, RealField


def band_limited_field(grid: PeriodicGrid, rng, kband=None, offset=0.0):
    """Random real field with spectrum confined to |k| <= kband."""
    kband = grid.n // 8 if kband is None else kband
    c = np.zeros(grid.n // 2 + 1, dtype=complex)
    c[1 : kband + 1] = rng.normal(size=kband) + 1j * rng.normal(size=kband)
    vals = np.fft.irfft(c, n=grid.n)
    return RealField(grid, vals + offset)


def positive_band_limited_field(grid: PeriodicGrid, rng, floor=0.5, kband=None):
    f = band_limited_field(grid, rng, kband=kband)
    return RealField(grid, f.values - f.min() + floor)


def smooth_positive_field(grid: PeriodicGrid, rng, floor=0.5, decay=0.5, amp=1.0):
    """Analytic positive field: spectrum exp(-decay*k) with random phases,
    rescaled to the requested amplitude and shifted to the floor."""
    c = np.zeros(grid.n // 2 + 1, dtype=complex)
    k = np.arange(1, grid.n // 2)
    c[1:-1] = np.exp(-decay * k) * (rng.normal(size=k.size) + 1j * rng.normal(size=k.size))
    vals = np.fft.irfft(c, n=grid.n)
    vals *= amp / max(np.abs(vals).max(), 1e-300)
    return RealField(grid, vals - vals.min() + floor)


@pytest.fixture
def grid():
    return PeriodicGrid(256)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
