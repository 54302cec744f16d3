"""Coefficients and right-hand sides of the arctan root-flow equation.

The equation in flux form,

    u_t + (1/pi) d/dx arctan(Hu / u) = 0,

is equivalent, for positive u, to the quasilinear form

    u_t + V u_x + gamma Lu = 0,
    V     = -(1/pi) Hu / (u^2 + (Hu)^2),
    gamma =  (1/pi)  u / (u^2 + (Hu)^2),

with L the half Laplacian.  The regularized problem adds delta to the
denominators and a delta * u_xx viscosity term.
"""

from dataclasses import dataclass

import numpy as np

from .spectral import (
    RealField,
    derivative,
    frac_laplacian,
    hilbert,
    pad_values,
    truncate_values,
)

# fields with delta=0 must stay strictly above this floor; rounding noise
# around an exact zero would otherwise blow up the quotients
EPS_POS = 1e-10


class PositivityError(ValueError):
    pass


@dataclass(frozen=True)
class Coefficients:
    V: RealField
    gamma: RealField
    rho: RealField
    delta: float


def _require_positive(u: RealField, delta: float):
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if delta == 0.0 and u.min() <= EPS_POS:
        raise PositivityError(
            f"min u = {u.min():.3e} <= {EPS_POS:.0e} with delta = 0"
        )


def coefficients(u: RealField, delta: float) -> Coefficients:
    """Transport velocity V, dissipation weight gamma, and modulus rho."""
    _require_positive(u, delta)
    hu = hilbert(u).values
    denom = delta + u.values**2 + hu**2
    v = -hu / (np.pi * denom)
    gamma = u.values / (np.pi * denom)
    rho = np.sqrt(denom)
    g = u.grid
    return Coefficients(RealField(g, v), RealField(g, gamma), RealField(g, rho), delta)


def _fine_fields(u: RealField):
    n = u.grid.n
    n_fine = int(np.ceil(1.5 * n / 2)) * 2
    uv = pad_values(u.values, n_fine)
    hu = pad_values(hilbert(u).values, n_fine)
    lu = pad_values(frac_laplacian(u).values, n_fine)
    ux = pad_values(derivative(u).values, n_fine)
    return uv, hu, lu, ux


def nonlinear_tendency(u: RealField, delta: float, dealias: bool = False) -> RealField:
    """The non-viscous tendency -(1/pi)(u Lu - Hu u_x) / (delta + u^2 + (Hu)^2).

    With delta = 0 this is evaluated through the flux form, which is an
    exact spectral derivative and therefore conserves the grid mean to
    rounding.  With dealias=True, u, Hu, Lu and u_x are zero-padded to a
    3/2 finer grid before the pointwise rational expression is formed.
    """
    _require_positive(u, delta)
    if delta == 0.0:
        return tendency_flux(u, dealias=dealias)
    if dealias:
        uv, hu, lu, ux = _fine_fields(u)
        fine = -(uv * lu - hu * ux) / (np.pi * (delta + uv**2 + hu**2))
        return RealField(u.grid, truncate_values(fine, u.grid.n))
    uv = u.values
    hu = hilbert(u).values
    lu = frac_laplacian(u).values
    ux = derivative(u).values
    out = -(uv * lu - hu * ux) / (np.pi * (delta + uv**2 + hu**2))
    return RealField(u.grid, out)


def tendency_regularized(u: RealField, delta: float, dealias: bool = False) -> RealField:
    """Full regularized tendency, non-viscous part plus delta * u_xx."""
    _require_positive(u, delta)
    if delta == 0.0:
        # identical to the flux form for positive u; keep one code path
        uv = u.values
        hu = hilbert(u).values
        lu = frac_laplacian(u).values
        ux = derivative(u).values
        if dealias:
            uv, hu, lu, ux = _fine_fields(u)
            fine = -(uv * lu - hu * ux) / (np.pi * (uv**2 + hu**2))
            return RealField(u.grid, truncate_values(fine, u.grid.n))
        return RealField(u.grid, -(uv * lu - hu * ux) / (np.pi * (uv**2 + hu**2)))
    base = nonlinear_tendency(u, delta, dealias=dealias)
    visc = derivative(derivative(u)).values
    return RealField(u.grid, base.values + delta * visc)


def tendency_flux(u: RealField, dealias: bool = False) -> RealField:
    """Flux-form tendency -(1/pi) d/dx arctan(Hu/u); mean-zero by construction."""
    if u.min() <= EPS_POS:
        raise PositivityError(
            f"min u = {u.min():.3e} <= {EPS_POS:.0e}; arctan argument degenerates"
        )
    if dealias:
        n = u.grid.n
        n_fine = int(np.ceil(1.5 * n / 2)) * 2
        uv = pad_values(u.values, n_fine)
        hu = pad_values(hilbert(u).values, n_fine)
        angle = truncate_values(np.arctan2(hu, uv), n)
    else:
        angle = np.arctan2(hilbert(u).values, u.values)
    flux = RealField(u.grid, angle / np.pi)
    return RealField(u.grid, -derivative(flux).values)
