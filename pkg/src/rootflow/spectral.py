"""Periodic grid, transforms, and Fourier-multiplier operators.

Everything here acts on real 2pi-periodic functions sampled on an
equispaced grid.  Fields are stored in physical space; the spectral
representation uses the rfft layout (coefficients for k = 0..n/2),
which is exactly the Hermitian half of the full coefficient set, so
real inverse transforms are automatic.

Conventions:
  c_k = (1/n) sum_j f(x_j) exp(-i k x_j),   so c_0 is the mean.
  Hilbert transform   : c_k -> -i sign(k) c_k   (Nyquist zeroed)
  derivative          : c_k -> i k c_k          (Nyquist zeroed)
  half Laplacian      : c_k -> |k| c_k
  heat semigroup      : c_k -> exp(-tau k^2) c_k
"""

from dataclasses import dataclass, field

import numpy as np

ROUNDTRIP_RTOL = 1e-12


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicGrid:
    """Equispaced grid x_j = 2 pi j / n on [0, 2pi)."""

    n: int

    def __post_init__(self):
        if self.n < 16 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 16, got n={self.n}")

    @property
    def dx(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def kmax(self) -> int:
        return self.n // 2

    @property
    def points(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def wavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers 0..n/2 of the rfft layout."""
        return np.arange(self.n // 2 + 1)


@dataclass(frozen=True)
class RealField:
    grid: PeriodicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite samples")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class SpectralField:
    """Hermitian half-spectrum: coeffs[k] = c_k for k = 0..n/2."""

    grid: PeriodicGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.grid.n // 2 + 1,):
            raise ValueError(
                f"expected {self.grid.n // 2 + 1} coefficients, got shape {c.shape}"
            )
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


def forward(f: RealField) -> SpectralField:
    return SpectralField(f.grid, np.fft.rfft(f.values) / f.grid.n)


def inverse(F: SpectralField) -> RealField:
    return RealField(F.grid, np.fft.irfft(F.coeffs * F.grid.n, n=F.grid.n))


def _apply_multiplier(f: RealField, mult: np.ndarray) -> RealField:
    c = np.fft.rfft(f.values) * mult
    return RealField(f.grid, np.fft.irfft(c, n=f.grid.n))


def hilbert(f: RealField) -> RealField:
    """Circular Hilbert transform, c_k -> -i sign(k) c_k.

    The mean is annihilated and the Nyquist mode is zeroed (the odd
    multiplier has no consistent value there).
    """
    k = f.grid.wavenumbers
    mult = -1j * np.sign(k).astype(complex)
    mult[-1] = 0.0
    return _apply_multiplier(f, mult)


def derivative(f: RealField) -> RealField:
    """Spectral d/dx, with the Nyquist mode zeroed."""
    k = f.grid.wavenumbers
    mult = 1j * k.astype(complex)
    mult[-1] = 0.0
    return _apply_multiplier(f, mult)


def frac_laplacian(f: RealField) -> RealField:
    """Half Laplacian (-d^2/dx^2)^(1/2) = d/dx o H, multiplier |k|."""
    return _apply_multiplier(f, f.grid.wavenumbers.astype(float))


def heat_propagate(f: RealField, tau: float) -> RealField:
    """Apply the heat semigroup exp(tau d^2/dx^2), tau >= 0."""
    if tau < 0:
        raise ValueError(f"heat propagation time must be >= 0, got {tau}")
    k = f.grid.wavenumbers.astype(float)
    return _apply_multiplier(f, np.exp(-tau * k * k))


def frac_laplacian_kernel(f: RealField, m: int) -> RealField:
    """Half Laplacian through its difference kernel,

        (1/4pi) pv int (f(x) - f(x-a)) / sin(a/2)^2 da,

    evaluated by the midpoint rule with m nodes a = (j+1/2) 2pi/m.  The
    differenced integrand is regular at a=0 and the midpoint nodes avoid
    the origin, so no principal-value surgery is needed.  Off-grid values
    f(x - a) come from the trigonometric interpolant.
    """
    if m < 2:
        raise ValueError("need at least 2 quadrature nodes")
    grid = f.grid
    c = np.fft.rfft(f.values)
    k = grid.wavenumbers
    alphas = (np.arange(m) + 0.5) * 2.0 * np.pi / m
    acc = np.zeros(grid.n)
    for a in alphas:
        shifted = np.fft.irfft(c * np.exp(-1j * k * a), n=grid.n)
        acc += (f.values - shifted) / np.sin(a / 2.0) ** 2
    acc *= (2.0 * np.pi / m) / (4.0 * np.pi)
    return RealField(grid, acc)


def _half_spectrum_weights(n):
    # multiplicity of each rfft bin in the full +/-k spectrum
    w = np.full(n // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def sobolev_seminorm(f: RealField, s: float) -> float:
    """Homogeneous Sobolev seminorm (2 pi sum_{k!=0} |k|^(2s) |c_k|^2)^(1/2).

    Equals the L2 norm of the half Laplacian raised to the power s
    applied to f; the mean never contributes.  Negative s is only
    meaningful on mean-zero fields.
    """
    c = np.fft.rfft(f.values) / f.grid.n
    if s < 0 and abs(c[0]) > 1e-13 * (1.0 + np.abs(c).max()):
        raise ValueError("negative-order seminorm requires a mean-zero field")
    k = f.grid.wavenumbers.astype(float)
    w = _half_spectrum_weights(f.grid.n)
    total = np.sum(w[1:] * k[1:] ** (2.0 * s) * np.abs(c[1:]) ** 2)
    return float(np.sqrt(2.0 * np.pi * total))


def l2_norm(f: RealField) -> float:
    return float(np.sqrt(f.grid.dx * np.sum(f.values**2)))


def check_same_grid(*fields):
    grids = {f.grid.n for f in fields}
    if len(grids) != 1:
        raise GridMismatchError(f"fields live on different grids: {sorted(grids)}")


def pad_values(values: np.ndarray, n_fine: int) -> np.ndarray:
    """Spectrally interpolate samples onto a finer equispaced grid."""
    n = values.shape[0]
    c = np.fft.rfft(values) / n
    c_fine = np.zeros(n_fine // 2 + 1, dtype=complex)
    c_fine[: n // 2 + 1] = c
    # the coarse Nyquist bin covers +/- n/2 jointly; split it evenly
    c_fine[n // 2] = 0.5 * c[n // 2].real
    return np.fft.irfft(c_fine * n_fine, n=n_fine)


def truncate_values(values_fine: np.ndarray, n: int) -> np.ndarray:
    """Project samples on a fine grid back onto the coarse n-point grid."""
    n_fine = values_fine.shape[0]
    c_fine = np.fft.rfft(values_fine) / n_fine
    c = c_fine[: n // 2 + 1].copy()
    c[-1] = c[-1].real  # coarse Nyquist bin must be real
    return np.fft.irfft(c * n, n=n)
