"""Time integration of the regularized root-flow equation.

Scheme: the stiff viscous term delta * u_xx is integrated exactly in
Fourier space (integrating factor exp(-delta k^2 dt)); the remaining
nonlocal tendency is advanced with a two-stage explicit Heun update.
The composition is second order in time and reduces to plain Heun when
delta = 0.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import dynamics, spectral
from .spectral import PeriodicGrid, RealField


class SolverAbort(RuntimeError):
    """Raised when positivity or finiteness is lost during a run."""


@dataclass(frozen=True)
class SolverConfig:
    delta: float = 0.0
    t_end: float = 1.0
    cfl: float = 0.5
    dt_max: float = np.inf
    snapshot_times: tuple = ()
    dealias: bool = False
    pos_floor: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.t_end < 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.dt_max <= 0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")
        times = tuple(float(t) for t in self.snapshot_times)
        if any(t < 0 or t > self.t_end for t in times):
            raise ValueError("snapshot times must lie in [0, t_end]")
        if list(times) != sorted(times):
            raise ValueError("snapshot times must be sorted")
        object.__setattr__(self, "snapshot_times", times)


@dataclass(frozen=True)
class SolverState:
    t: float
    u: RealField
    step_count: int = 0
    last_dt: float = 0.0


@dataclass
class StepRecord:
    t: float
    dt: float
    min_u: float
    max_u: float
    mass: float
    h12: float
    dissipation: float


@dataclass
class Trajectory:
    snapshots: list = field(default_factory=list)  # (t, RealField) pairs
    records: list = field(default_factory=list)  # StepRecord per accepted step

    @property
    def times(self):
        return [t for t, _ in self.snapshots]

    def field_at(self, t: float) -> RealField:
        for ts, u in self.snapshots:
            if abs(ts - t) <= 1e-12 * max(1.0, abs(t)):
                return u
        raise KeyError(f"no snapshot at t={t}")


def mollified_initial(u0: RealField, delta: float) -> RealField:
    """Initial data of the regularized problem: heat-mollify u0 by delta."""
    if u0.min() <= 0:
        raise ValueError(f"initial data must be positive, min u0 = {u0.min():.3e}")
    return spectral.heat_propagate(u0, delta)


def stable_dt(state: SolverState, cfg: SolverConfig) -> float:
    """Explicit step bound cfl * min(1/(max gamma * kmax), dx/max|V|, dt_max),
    shrunk so the step lands exactly on the next snapshot or t_end."""
    coeffs = dynamics.coefficients(state.u, cfg.delta)
    gmax = coeffs.gamma.max()
    vmax = float(np.abs(coeffs.V.values).max())
    grid = state.u.grid
    dt = cfg.cfl * min(
        1.0 / (max(gmax, 1e-300) * grid.kmax),
        grid.dx / max(vmax, 1e-300),
        cfg.dt_max,
    )
    return min(dt, _time_to_next_boundary(state.t, cfg))


def _time_to_next_boundary(t: float, cfg: SolverConfig) -> float:
    boundaries = [s for s in cfg.snapshot_times if s > t + 1e-13] + [cfg.t_end]
    return min(boundaries) - t


def step(state: SolverState, dt: float, cfg: SolverConfig) -> SolverState:
    """One integrating-factor Heun step of size dt."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    u = state.u
    tau = cfg.delta * dt
    try:
        k1 = dynamics.nonlinear_tendency(u, cfg.delta, dealias=cfg.dealias).values
        pred = spectral.heat_propagate(RealField(u.grid, u.values + dt * k1), tau)
        k2 = dynamics.nonlinear_tendency(pred, cfg.delta, dealias=cfg.dealias).values
    except dynamics.PositivityError as exc:
        raise SolverAbort(f"stage positivity loss at t={state.t:.6g}: {exc}") from exc
    half = spectral.heat_propagate(RealField(u.grid, u.values + 0.5 * dt * k1), tau)
    new_values = half.values + 0.5 * dt * k2
    if not np.all(np.isfinite(new_values)):
        raise SolverAbort(f"non-finite field after step at t={state.t:.6g}")
    u_new = RealField(u.grid, new_values)
    if u_new.min() <= cfg.pos_floor:
        raise SolverAbort(
            f"positivity lost at t={state.t + dt:.6g}: "
            f"min u = {u_new.min():.3e} <= floor {cfg.pos_floor:.1e}"
        )
    return SolverState(t=state.t + dt, u=u_new, step_count=state.step_count + 1, last_dt=dt)


def _record(state: SolverState, delta: float) -> StepRecord:
    from .diagnostics import dissipation, mass

    u = state.u
    return StepRecord(
        t=state.t,
        dt=state.last_dt,
        min_u=u.min(),
        max_u=u.max(),
        mass=mass(u),
        h12=spectral.sobolev_seminorm(u, 0.5),
        dissipation=dissipation(u, delta),
    )


def solve(u0: RealField, cfg: SolverConfig) -> Trajectory:
    """Integrate from the mollified initial data to t_end.

    Snapshots are recorded at t=0, at every requested snapshot time
    (steps land on them exactly), and at t_end.  A scalar record is
    appended for the initial state and after every accepted step.
    """
    u = mollified_initial(u0, cfg.delta)
    if u.min() <= cfg.pos_floor:
        raise SolverAbort(
            f"mollified initial data below floor: min u = {u.min():.3e}"
        )
    state = SolverState(t=0.0, u=u)
    traj = Trajectory()
    traj.snapshots.append((0.0, u))
    traj.records.append(_record(state, cfg.delta))
    pending = [s for s in cfg.snapshot_times if s > 1e-13]
    while state.t < cfg.t_end - 1e-13:
        dt = stable_dt(state, cfg)
        state = step(state, dt, cfg)
        traj.records.append(_record(state, cfg.delta))
        if pending and abs(state.t - pending[0]) <= 1e-11:
            traj.snapshots.append((pending[0], state.u))
            pending.pop(0)
    if not traj.snapshots or abs(traj.snapshots[-1][0] - cfg.t_end) > 1e-11:
        traj.snapshots.append((cfg.t_end, state.u))
    return traj


def delta_continuation(u0: RealField, deltas, t_end: float, cfg: SolverConfig):
    """Run solve for each delta in a strictly decreasing list and report the
    sup-over-snapshots H^{1/2} and L2 distances between consecutive members.

    Returns (runs, distances) where runs is a list of (delta, Trajectory)
    and distances a list of dicts with keys 'h12' and 'l2'.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas):
        raise ValueError("continuation deltas must be positive")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("continuation deltas must be strictly decreasing")
    runs = []
    for d in deltas:
        run_cfg = replace(cfg, delta=d, t_end=t_end)
        try:
            runs.append((d, solve(u0, run_cfg)))
        except SolverAbort as exc:
            raise SolverAbort(f"continuation member delta={d:g} failed: {exc}") from exc
    distances = []
    for (da, ta), (db, tb) in zip(runs, runs[1:]):
        if ta.times != tb.times:
            raise ValueError("continuation members disagree on snapshot times")
        d_h12 = 0.0
        d_l2 = 0.0
        for (_, ua), (_, ub) in zip(ta.snapshots, tb.snapshots):
            diff = RealField(ua.grid, ua.values - ub.values)
            d_h12 = max(d_h12, spectral.sobolev_seminorm(diff, 0.5))
            d_l2 = max(d_l2, spectral.l2_norm(diff))
        if not (np.isfinite(d_h12) and np.isfinite(d_l2)):
            raise SolverAbort(f"non-finite continuation distance at delta={db:g}")
        distances.append({"h12": d_h12, "l2": d_l2})
    return runs, distances


def rough_initial_data(
    grid: PeriodicGrid,
    c0: float = 1.0,
    eta: float = 0.01,
    amplitude: float = 0.25,
    seed: int = 0,
) -> RealField:
    """Seeded rough datum: half-spectrum (1+|k|)^(-1-eta) with uniform random
    phases, rescaled to the requested amplitude, offset so min u = c0."""
    rng = np.random.default_rng(seed)
    k = grid.wavenumbers
    c = np.zeros(grid.n // 2 + 1, dtype=complex)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=grid.n // 2 - 1)
    c[1:-1] = (1.0 + k[1:-1]) ** (-1.0 - eta) * np.exp(1j * phases)
    r = np.fft.irfft(c * grid.n, n=grid.n)
    r *= amplitude / np.abs(r).max()
    return RealField(grid, r + (c0 - r.min()))
