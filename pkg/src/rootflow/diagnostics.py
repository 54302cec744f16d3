"""Quantitative functionals on fields and trajectories.

These implement the observable side of the analysis: the coercive
dissipation integral, the energy budget with its factor-10 bound, the
extremum (maximum-principle) drifts, the parabolic smoothing fit, and
the L-infinity stability comparison of paired runs.
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics, spectral
from .spectral import RealField

ENERGY_BOUND = 10.0


@dataclass(frozen=True)
class EnergyBudget:
    h12_sq_sup: float
    dissipation_cum: float
    initial_h12_sq: float
    bound_ratio: float

    @property
    def within_bound(self) -> bool:
        return self.bound_ratio <= ENERGY_BOUND


@dataclass(frozen=True)
class SmoothingReport:
    s: float
    eps0: float
    sup_weighted: float
    sup_time: float
    slope: float

    def passes(self, slack: float) -> bool:
        return self.slope >= -(self.s + self.eps0) * (1.0 + slack)


@dataclass(frozen=True)
class StabilityReport:
    times: tuple
    distances: tuple
    growth: float


def mass(u: RealField) -> float:
    """Grid quadrature of the integral of u over the circle."""
    return float(u.grid.dx * np.sum(u.values))


def dissipation(u: RealField, delta: float) -> float:
    """Coercive quantity int u (Lu)^2 / (delta + u^2 + (Hu)^2) dx."""
    dynamics._require_positive(u, delta)
    lu = spectral.frac_laplacian(u).values
    hu = spectral.hilbert(u).values
    integrand = u.values * lu**2 / (delta + u.values**2 + hu**2)
    return float(u.grid.dx * np.sum(integrand))


def energy_budget(traj, delta: float) -> EnergyBudget:
    """Energy inequality ledger: sup of the squared H^{1/2} seminorm plus the
    time-integrated dissipation, against 10x the initial squared seminorm.

    Time integration uses the per-step scalar records (trapezoid), so the
    budget does not depend on how densely snapshots were requested.  For
    constant data the homogeneous seminorm vanishes identically and the
    ratio is defined as 0.
    """
    if not traj.records:
        raise ValueError("trajectory has no scalar records")
    t = np.array([r.t for r in traj.records])
    h12_sq = np.array([r.h12 for r in traj.records]) ** 2
    diss = np.array([r.dissipation for r in traj.records])
    sup = float(h12_sq.max())
    cum = float(np.trapezoid(diss, t)) if len(t) > 1 else 0.0
    initial = float(h12_sq[0])
    ratio = 0.0 if initial == 0.0 else (sup + cum) / initial
    return EnergyBudget(sup, cum, initial, ratio)


def extremum_report(traj):
    """(min-drift, max-drift) of the run relative to the initial extrema.

    The first entry is min over time of (min u(t) - min u(0)) and must stay
    above -tol for a maximum-principle-respecting run; the second is max
    over time of (max u(t) - max u(0)) and must stay below +tol.
    """
    if not traj.records:
        raise ValueError("trajectory has no scalar records")
    min0 = traj.records[0].min_u
    max0 = traj.records[0].max_u
    min_drift = min(r.min_u - min0 for r in traj.records)
    max_drift = max(r.max_u - max0 for r in traj.records)
    return min_drift, max_drift


def smoothing_fit(traj, s: float, eps0: float, t_min: float) -> SmoothingReport:
    """Weighted-norm smoothing diagnostic on snapshots with t >= t_min > 0.

    Computes sup over usable snapshots of t^(s+eps0) * ||u(t)||_{H^{1/2+s}}
    and the least-squares slope of log ||u(t)||_{H^{1/2+s}} against log t.
    """
    if t_min <= 0:
        raise ValueError("t_min must be positive")
    pts = [(t, u) for t, u in traj.snapshots if t >= t_min - 1e-13]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 snapshots with t >= {t_min}, got {len(pts)}")
    times = np.array([t for t, _ in pts])
    norms = np.array([spectral.sobolev_seminorm(u, 0.5 + s) for _, u in pts])
    weighted = times ** (s + eps0) * norms
    i_sup = int(np.argmax(weighted))
    slope = float(np.polyfit(np.log(times), np.log(norms), 1)[0])
    return SmoothingReport(
        s=s,
        eps0=eps0,
        sup_weighted=float(weighted[i_sup]),
        sup_time=float(times[i_sup]),
        slope=slope,
    )


def stability_compare(traj1, traj2) -> StabilityReport:
    """Per-snapshot L-infinity gap d(t) = max |u1 - u2| between two runs on a
    common snapshot grid, plus the smallest G with d(t) <= G d(0)."""
    t1, t2 = traj1.times, traj2.times
    if len(t1) != len(t2) or any(abs(a - b) > 1e-12 for a, b in zip(t1, t2)):
        raise ValueError("trajectories disagree on snapshot times")
    dists = []
    for (_, u1), (_, u2) in zip(traj1.snapshots, traj2.snapshots):
        spectral.check_same_grid(u1, u2)
        dists.append(float(np.abs(u1.values - u2.values).max()))
    d0 = dists[0]
    growth = 0.0 if d0 == 0.0 else max(d / d0 for d in dists)
    return StabilityReport(tuple(t1), tuple(dists), growth)
