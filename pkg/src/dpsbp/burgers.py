"""Entropy-stable split-form Burgers semi-discretization with volume upwinding.

The semi-discrete scheme on a periodic multi-block mesh is

    du/dt = -[ alpha D (u^2/2) + (1 - alpha) u o (D u) ] + gamma Ds u

with D, Ds the central/dissipation parts of the penalized global pair.  The
split parameter alpha = 2/3 makes the discrete energy <u, u>_H conserved for
gamma = 0 and dissipated for gamma > 0; alpha = 1 recovers the conservative
flux form.  The entropy variable is g = u and the entropy is e = u^2.

The module also provides the optimal volume-upwind amplitude gamma_opt (the
smallest gamma absorbing the linearized split-form residual into the upwind
flux), the global Lax-Friedrichs amplitude, and the finite-volume flux
decomposition of the interior scheme into centered/residual/upwind faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotFDGrid, UnsupportedOrder
from .multiblock import GlobalOperator
from .operators import CENTRAL, FD_DRP, FD_UPWIND

__all__ = ["BurgersScheme", "FluxDecomposition", "burgers_rhs", "kappa",
           "gamma_opt", "gamma_lf", "fv_fluxes"]


@dataclass
class BurgersScheme:
    """Split-form Burgers scheme on an assembled periodic mesh."""
    gop: GlobalOperator
    alpha: float = 2.0 / 3.0
    gamma: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.gamma < 0.0:
            raise ValueError("gamma must be nonnegative")

    def rhs(self, u, t=0.0):
        return burgers_rhs(u, self)


def burgers_rhs(u, scheme):
    """Tendency of the split-form volume-upwinded Burgers scheme.

    Written against generic array semantics so dual numbers propagate
    through it unchanged.
    """
    D = scheme.gop.D
    Ds = scheme.gop.Ds
    a = scheme.alpha
    flux = D @ (u * u * 0.5)
    adv = u * (D @ u)
    out = -(a * flux + (1.0 - a) * adv)
    if scheme.gamma != 0.0:
        out = out + scheme.gamma * (Ds @ u)
    return out


def kappa(interior_order):
    """Order-dependent multiplier of the optimal upwind amplitude.

    Equals 1, 2, 3, 4, 5 for odd orders 1, 3, 5, 7, 9 and 3/2, 5/2, 7/2,
    9/2, 11/2 for even orders 2, 4, 6, 8, 10; both sequences are (p + 1)/2.
    """
    if not isinstance(interior_order, (int, np.integer)) or \
            not 1 <= interior_order <= 10:
        raise UnsupportedOrder(
            "kappa is defined for orders 1..10, got %r" % (interior_order,))
    return (interior_order + 1) / 2.0


def gamma_opt(interior_order, alpha, baseflow, dx, D):
    """Optimal volume-upwind amplitude for a given base flow.

    gamma_opt = (1 - alpha) * kappa(order) * max_i |dx_i (D U)_i|, with D the
    central part of the scheme's global pair and dx the node spacing (scalar
    for equidistant grids, per-node array otherwise).
    """
    k = kappa(interior_order)
    du = np.asarray(D @ np.asarray(baseflow, dtype=float))
    return (1.0 - alpha) * k * float(np.max(np.abs(dx * du)))


def gamma_lf(baseflow):
    """Global Lax-Friedrichs upwind amplitude max|U|."""
    return float(np.max(np.abs(np.asarray(baseflow))))


@dataclass
class FluxDecomposition:
    """Per-node face fluxes of the finite-volume reformulation.

    For node i, *_plus[i] is the flux at face i+1/2 and *_minus[i] the flux
    at face i-1/2; fN = fC + fR + fU.  On interior nodes the flux difference
    (fN_plus - fN_minus)/dx reproduces minus the scheme tendency.
    """
    fC_plus: np.ndarray
    fC_minus: np.ndarray
    fR_plus: np.ndarray
    fR_minus: np.ndarray
    fU_plus: np.ndarray
    fU_minus: np.ndarray

    @property
    def fN_plus(self):
        return self.fC_plus + self.fR_plus + self.fU_plus

    @property
    def fN_minus(self):
        return self.fC_minus + self.fR_minus + self.fU_minus


def fv_fluxes(u, scheme):
    """Finite-volume flux decomposition on a single-element FD grid.

    The centered, residual, and upwind faces at node i are partial row sums
    of the central and dissipation operators:

        fC_{i+1/2} = dx sum_{j>i} D_ij f_j + f_i/2,
        fR_{i+1/2} = -(1-alpha)/2 dx sum_{j>i} D_ij (u_i - u_j)^2,
        fU_{i+1/2} = -gamma dx (Ds_ii u_i / 2 + sum_{j>i} Ds_ij u_j),

    with the mirrored sums over j < i at face i-1/2 (opposite sign).
    Requires a one-element equidistant finite-difference mesh.
    """
    mesh = scheme.gop.mesh
    pair = mesh.pair
    if pair.family not in (FD_UPWIND, FD_DRP, CENTRAL) or mesh.n_elements != 1:
        raise NotFDGrid("flux decomposition needs a single-element FD grid")
    gaps = np.diff(pair.nodes)
    dx = gaps[0]
    if not np.allclose(gaps, dx, rtol=1e-12, atol=0.0):
        raise NotFDGrid("flux decomposition needs an equidistant grid")

    u = np.asarray(u, dtype=float)
    n = len(u)
    D = scheme.gop.D
    Ds = scheme.gop.Ds
    a = scheme.alpha
    g = scheme.gamma
    f = 0.5 * u * u

    upper = np.triu(np.ones((n, n)), k=1)
    lower = np.tril(np.ones((n, n)), k=-1)
    fC_p = dx * ((D * upper) @ f) + 0.5 * f
    fC_m = -dx * ((D * lower) @ f) + 0.5 * f
    diff2 = (u[:, None] - u[None, :]) ** 2
    fR_p = -0.5 * (1.0 - a) * dx * np.sum(D * upper * diff2, axis=1)
    fR_m = 0.5 * (1.0 - a) * dx * np.sum(D * lower * diff2, axis=1)
    half_diag = 0.5 * np.diag(Ds) * u
    fU_p = -g * dx * (half_diag + (Ds * upper) @ u)
    fU_m = g * dx * (half_diag + (Ds * lower) @ u)
    return FluxDecomposition(fC_plus=fC_p, fC_minus=fC_m, fR_plus=fR_p,
                             fR_minus=fR_m, fU_plus=fU_p, fU_minus=fU_m)
