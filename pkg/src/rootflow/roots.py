"""Root flow of real-rooted polynomials under repeated differentiation.

The motivating discrete system: place n real roots according to a density,
differentiate the polynomial k = floor(t*n) times, and follow the surviving
roots.  Between consecutive roots of p the logarithmic derivative
g(x) = sum 1/(x - x_i) decreases strictly from +inf to -inf, so each root of
p' is found by bisection in its interlacing interval.
"""

from dataclasses import dataclass

import numpy as np

BISECT_RELTOL = 1e-12
MIN_ROOT_GAP = 1e-13


@dataclass(frozen=True)
class RootEnsemble:
    roots: np.ndarray
    n0: int
    k: int = 0

    def __post_init__(self):
        r = np.asarray(self.roots, dtype=float)
        if r.ndim != 1 or r.size < 1:
            raise ValueError("ensemble needs at least one root")
        if np.any(np.diff(r) <= 0):
            raise ValueError("roots must be strictly increasing")
        if r.size != self.n0 - self.k:
            raise ValueError(
                f"{r.size} roots inconsistent with n0={self.n0}, k={self.k}"
            )
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "roots", r)

    def __len__(self):
        return self.roots.size

    @property
    def span(self) -> float:
        return float(self.roots[-1] - self.roots[0])


def quantile_sample(x: np.ndarray, density: np.ndarray, n: int) -> RootEnsemble:
    """Deterministic n-point sample at the (j - 1/2)/n quantiles of a density.

    The CDF is built by trapezoid quadrature on the (x, density) table and
    inverted by monotone linear interpolation.
    """
    x = np.asarray(x, dtype=float)
    density = np.asarray(density, dtype=float)
    if n < 2:
        raise ValueError("need n >= 2 sample points")
    if np.any(density < 0):
        raise ValueError("density must be nonnegative")
    increments = 0.5 * (density[1:] + density[:-1]) * np.diff(x)
    cdf = np.concatenate([[0.0], np.cumsum(increments)])
    total = cdf[-1]
    if total <= 0:
        raise ValueError("density has zero total mass")
    cdf = cdf / total
    targets = (np.arange(n) + 0.5) / n
    # keep the interpolation table strictly increasing where the density
    # vanishes by collapsing flat runs of the CDF
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    roots = np.interp(targets, cdf[keep], x[keep])
    if np.any(np.diff(roots) <= 0):
        raise ValueError("quantile sample produced coincident roots")
    return RootEnsemble(roots, n0=n, k=0)


def quantile_sample_field(u, margin: float = 0.5, n: int = 100) -> RootEnsemble:
    """Quantile-sample a periodic field treated as a density on the window
    (-pi + margin, pi - margin); the support must not touch the seam."""
    x = np.where(u.grid.points >= np.pi, u.grid.points - 2.0 * np.pi, u.grid.points)
    order = np.argsort(x)
    x = x[order]
    vals = u.values[order]
    inside = np.abs(x) <= np.pi - margin
    outside_mass = u.grid.dx * np.sum(vals[~inside])
    total_mass = u.grid.dx * np.sum(vals)
    if total_mass <= 0:
        raise ValueError("field has zero total mass")
    if outside_mass > 1e-8 * total_mass:
        raise ValueError(
            f"density support reaches the periodic seam "
            f"(mass {outside_mass:.3e} outside the window)"
        )
    return quantile_sample(x[inside], vals[inside], n)


def _log_derivative(points: np.ndarray, roots: np.ndarray) -> np.ndarray:
    # pairwise summation via np.sum keeps the cancellation error small
    # even for large ensembles
    return np.sum(1.0 / (points[:, None] - roots[None, :]), axis=1)


def derivative_roots(e: RootEnsemble) -> RootEnsemble:
    """Roots of p' for p(x) = prod (x - x_j), by bisection per interval.

    Each open interval between consecutive roots brackets exactly one zero
    of the strictly decreasing log-derivative; all intervals are bisected
    simultaneously to a tolerance of BISECT_RELTOL times the interval width.
    """
    r = e.roots
    if r.size < 2:
        raise ValueError("need at least 2 roots to differentiate")
    gaps = np.diff(r)
    if np.any(gaps < MIN_ROOT_GAP):
        raise ValueError(
            f"repeated roots (gap < {MIN_ROOT_GAP:g}): bisection bracket degenerates"
        )
    lo = r[:-1].copy()
    hi = r[1:].copy()
    # g -> +inf at the left endpoint and -inf at the right one, so the
    # endpoint signs never need evaluating
    n_iter = int(np.ceil(np.log2(1.0 / BISECT_RELTOL))) + 2
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        positive = _log_derivative(mid, r) > 0.0
        lo = np.where(positive, mid, lo)
        hi = np.where(positive, hi, mid)
    out = 0.5 * (lo + hi)
    if np.any(out <= r[:-1]) or np.any(out >= r[1:]):
        raise RuntimeError("bisection output escaped its interlacing interval")
    return RootEnsemble(out, n0=e.n0, k=e.k + 1)


def root_flow(e: RootEnsemble, t: float) -> RootEnsemble:
    """Apply floor(t * n0) differentiation passes, t in [0, 1)."""
    if not (0.0 <= t < 1.0):
        raise ValueError(f"flow time must lie in [0, 1), got {t}")
    k = int(np.floor(t * e.n0))
    if e.k + k > e.n0 - 1:
        raise ValueError(f"t={t} removes more roots than the ensemble has")
    out = e
    for _ in range(k):
        out = derivative_roots(out)
    return out


def _w1_between_cdfs(xs, f1, f2):
    # both CDFs are piecewise linear on the merged breakpoint grid;
    # integrate |f1 - f2| exactly, splitting segments at sign changes
    d = f1 - f2
    total = 0.0
    for i in range(len(xs) - 1):
        w = xs[i + 1] - xs[i]
        a, b = d[i], d[i + 1]
        if a * b >= 0:
            total += 0.5 * abs(a + b) * w
        else:
            xc = a / (a - b)
            total += 0.5 * w * (abs(a) * xc + abs(b) * (1.0 - xc))
    return total


def wasserstein1(e: RootEnsemble, x, density, normalize: bool = True) -> float:
    """W1 distance between the empirical measure of the roots and a density
    given as a table (x, density) on an interval, via the L1 distance of CDFs.

    With normalize=True (default) both measures are renormalized to
    probability first; otherwise the root measure carries weight len(e) and
    the density its quadrature mass.
    """
    x = np.asarray(x, dtype=float)
    density = np.asarray(density, dtype=float)
    if np.any(density < 0):
        raise ValueError("density must be nonnegative")
    increments = 0.5 * (density[1:] + density[:-1]) * np.diff(x)
    dens_cdf = np.concatenate([[0.0], np.cumsum(increments)])
    dens_mass = dens_cdf[-1]
    if dens_mass <= 0:
        raise ValueError("density has zero total mass")
    roots = e.roots
    root_mass = float(len(e))
    if normalize:
        dens_cdf = dens_cdf / dens_mass
        root_weight = 1.0 / root_mass
    else:
        root_weight = 1.0
    lo = min(x[0], roots[0])
    hi = max(x[-1], roots[-1])
    breakpoints = np.unique(np.concatenate([x, roots, [lo, hi]]))
    f_dens = np.interp(breakpoints, x, dens_cdf, left=0.0, right=dens_cdf[-1])
    f_emp = root_weight * np.searchsorted(roots, breakpoints, side="right")
    # the empirical CDF jumps at the roots; account for each jump by
    # integrating the pre-jump value up to the root and the post-jump
    # value after it
    total = 0.0
    for i in range(len(breakpoints) - 1):
        a, b = breakpoints[i], breakpoints[i + 1]
        xs = np.array([a, b])
        fd = np.array([f_dens[i], f_dens[i + 1]])
        fe = np.array([f_emp[i], f_emp[i]])  # constant between jumps
        total += _w1_between_cdfs(xs, fe, fd)
    return total
