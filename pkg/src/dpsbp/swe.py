"""Entropy-stable shallow water semi-discretizations in 1D and 2D.

The 1D unknowns are q = [h, hu] with entropy e(q) = (hu^2 + g h^2)/2 and
entropy variables (u, phi), phi = g h - u^2/2.  The skew-symmetric volume
form

    dh/dt  = -D(hu)
    dhu/dt = -[ D(h u^2)/2 + u D(hu)/2 + hu D(u)/2 + g h D(h) ]

conserves the discrete entropy exactly on a periodic central pair; interface
penalties (weighted by per-interface upwind parameters acting on the
conjugate entropy variables: phi penalizes the mass equation, u the
momentum equation) and volume upwinding gamma_i Ds g_i make the entropy
rate strictly dissipative.  The 2D extension applies the same pattern
dimension by dimension on a tensor-product grid with unknowns (h, hu, hv),
entropy variables (phi, u, v), phi = g h - (u^2 + v^2)/2, and an optional
Coriolis source (+f hv, -f hu) that is exactly energy neutral.

Upwind parameters are computed from a base state and then passed in frozen,
so linearizations differentiate the tendency at fixed penalty amplitudes.
For nonlinear time integration the factories also accept ``upwind=None``,
which recomputes the amplitudes from the instantaneous state on every
evaluation (the definitions are element maxima of the current fields).
Adaptive amplitudes involve max/abs and are therefore rejected for dual
inputs; differentiate at frozen amplitudes instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveHeight, NonSmoothPoint
from .linearize import Dual, apply_matrix, concatenate
from .multiblock import Mesh1D

__all__ = ["PhysicsParams", "SweState1D", "SweState2D", "UpwindMatrices",
           "Upwind2D", "TensorMesh2D", "swe_entropy_variables",
           "swe_upwind_params", "swe2d_upwind_params", "zero_upwind",
           "zero_upwind_2d", "make_swe1d_rhs", "swe1d_rhs", "make_swe2d_rhs",
           "swe2d_rhs", "entropy_rate_from_tendency", "entropy_rate_formula",
           "init_stationary_vortex", "init_kelvin_helmholtz",
           "KH_L_DOMAIN", "KH_DAY"]

KH_L_DOMAIN = 2.0 * math.pi * 6371.22e3
KH_DAY = 86400.0


@dataclass
class PhysicsParams:
    """Physical constants of a shallow water run."""
    g: float = 1.0
    f_coriolis: float = 0.0
    H_mean: float = 1.0e4
    L_domain: float = KH_L_DOMAIN
    u_bar0: float = 50.0
    h_bar0: float = 100.0
    k_bump: float = 1.0e3

    def __post_init__(self):
        if self.g <= 0.0:
            raise ValueError("gravitational acceleration must be positive")


def _values(x):
    return x.val if isinstance(x, Dual) else np.asarray(x)


def _check_height(h, where=""):
    hv = _values(h)
    hmin = float(np.min(hv))
    if not hmin > 0.0:
        idx = int(np.argmin(hv))
        raise NonPositiveHeight(
            "water height must stay positive%s: min h = %.6e at flat index %d"
            % ((" " + where) if where else "", hmin, idx))


@dataclass
class SweState1D:
    """Nodal water height and momentum on a 1D mesh."""
    h: np.ndarray
    hu: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.hu = np.asarray(self.hu, dtype=float)
        if self.h.shape != self.hu.shape:
            raise ValueError("h and hu must have matching shapes")

    @property
    def u(self):
        return self.hu / self.h

    def pack(self):
        return np.concatenate([self.h, self.hu])

    @staticmethod
    def unpack(q):
        n = len(q) // 2
        return SweState1D(q[:n], q[n:])

    def check_positive(self):
        _check_height(self.h)


@dataclass
class SweState2D:
    """Nodal water height and momenta on a tensor-product grid (x, y)."""
    h: np.ndarray
    hu: np.ndarray
    hv: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.hu = np.asarray(self.hu, dtype=float)
        self.hv = np.asarray(self.hv, dtype=float)
        if not self.h.shape == self.hu.shape == self.hv.shape:
            raise ValueError("h, hu, hv must have matching shapes")

    @property
    def u(self):
        return self.hu / self.h

    @property
    def v(self):
        return self.hv / self.h

    def pack(self):
        return np.concatenate([self.h.ravel(), self.hu.ravel(),
                               self.hv.ravel()])

    @staticmethod
    def unpack(q, shape):
        n = shape[0] * shape[1]
        return SweState2D(q[:n].reshape(shape), q[n:2 * n].reshape(shape),
                          q[2 * n:].reshape(shape))

    def check_positive(self):
        _check_height(self.h)


@dataclass
class UpwindMatrices:
    """Frozen upwind amplitudes: per-interface rows and per-element rows.

    upsilon[i, c] is the averaged interface parameter of component c at
    interface i; gamma[k, c] the volume amplitude of component c on element
    k.  All entries must be nonnegative.
    """
    upsilon: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        self.upsilon = np.atleast_2d(np.asarray(self.upsilon, dtype=float))
        self.gamma = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        if np.any(self.upsilon < 0.0) or np.any(self.gamma < 0.0):
            raise ValueError("upwind parameters must be nonnegative")

    def scaled(self, interface=1.0, volume=1.0):
        return UpwindMatrices(interface * self.upsilon, volume * self.gamma)


def zero_upwind(n_interfaces, n_elements, n_components=2):
    return UpwindMatrices(np.zeros((n_interfaces, n_components)),
                          np.zeros((n_elements, n_components)))


def swe_entropy_variables(state, g):
    """Entropy variables conjugate to the conserved unknowns.

    1D: (u, phi) with phi = g h - u^2/2.  2D: (u, v, phi) with
    phi = g h - (u^2 + v^2)/2.
    """
    _check_height(state.h)
    if isinstance(state, SweState2D):
        u = state.u
        v = state.v
        phi = g * state.h - 0.5 * (u * u + v * v)
        return u, v, phi
    u = state.u
    phi = g * state.h - 0.5 * u * u
    return u, phi


def _element_max(values, n_elements):
    return np.max(np.asarray(values).reshape(n_elements, -1), axis=1)


def _interface_average(per_element, interfaces):
    rows = [0.5 * (per_element[k] + per_element[k2])
            for (_, _, k, k2) in interfaces]
    return np.array(rows)


def swe_upwind_params(state, gop, g):
    """Interface and volume upwind amplitudes from a 1D base state.

    Per element k: upsilon_1 = max_j h_j (|u_j| + sqrt(g h_j))/(h_j g + u_j^2)
    weights the mass-equation penalty on phi; upsilon_2 = max_j |h_j u_j|
    weights the momentum-equation penalty on u.  Interface rows average the
    two adjacent elements; volume amplitudes equal the element values.
    """
    _check_height(state.h)
    K = gop.mesh.n_elements
    h = state.h
    u = state.u
    u1 = _element_max(h * (np.abs(u) + np.sqrt(g * h)) / (h * g + u * u), K)
    u2 = _element_max(np.abs(state.hu), K)
    per_elem = np.column_stack([u1, u2])
    return UpwindMatrices(_interface_average(per_elem, gop.interfaces),
                          per_elem)


def _weighted_btilde(gop, weights):
    """Dense interface-penalty matrix: the two-sided jump pattern with one
    nonnegative weight per interface."""
    n = gop.D.shape[0]
    W = np.zeros((n, n))
    for w, (a, b, _, _) in zip(weights, gop.interfaces):
        W[a, a] -= w
        W[a, b] += w
        W[b, a] += w
        W[b, b] -= w
    return W


def _element_map(per_element, n_nodes):
    return np.repeat(np.asarray(per_element, dtype=float), n_nodes)


def make_swe1d_rhs(gop, params, upwind=None, form="skew"):
    """Tendency closure q -> dq/dt on packed [h, hu] vectors.

    form = "skew" uses the entropy-conserving split volume terms plus the
    interface/volume upwind penalties; form = "conservative" is the plain
    flux form without any penalty (linear-stable reference scheme).
    All captured operators are constant, so dual numbers pass through.
    upwind = None (skew form) recomputes the penalty amplitudes from the
    instantaneous state on every call; that path rejects dual inputs.
    """
    if form not in ("skew", "conservative"):
        raise ValueError("unknown form %r" % (form,))
    D = gop.D
    Ds = gop.Ds
    hd = gop.hdiag
    g = params.g
    n_nodes = gop.mesh.pair.n_nodes
    use_penalty = form == "skew"
    adaptive = use_penalty and upwind is None

    def penalty_tables(up):
        return (_weighted_btilde(gop, up.upsilon[:, 0]),
                _weighted_btilde(gop, up.upsilon[:, 1]),
                _element_map(up.gamma[:, 0], n_nodes),
                _element_map(up.gamma[:, 1], n_nodes))

    if use_penalty and not adaptive:
        W1, W2, g1, g2 = penalty_tables(upwind)

    def rhs(q, t=0.0):
        n = len(q) // 2
        h = q[:n]
        hu = q[n:]
        _check_height(h, "in swe1d rhs")
        u = hu / h
        if form == "skew":
            dh = -(D @ hu)
            dhu = -(0.5 * (D @ (hu * u)) + 0.5 * u * (D @ hu)
                    + 0.5 * hu * (D @ u) + g * h * (D @ h))
        else:
            dh = -(D @ hu)
            dhu = -(D @ (hu * u + 0.5 * g * h * h))
        if use_penalty:
            if adaptive:
                if isinstance(q, Dual):
                    raise NonSmoothPoint(
                        "adaptive upwind amplitudes are not differentiable; "
                        "linearize with frozen upwind matrices")
                Wa, Wb, ga, gb = penalty_tables(
                    swe_upwind_params(SweState1D(h, hu), gop, g))
            else:
                Wa, Wb, ga, gb = W1, W2, g1, g2
            phi = g * h - 0.5 * u * u
            dh = dh + 0.5 * (Wa @ phi) / hd + ga * (Ds @ phi)
            dhu = dhu + 0.5 * (Wb @ u) / hd + gb * (Ds @ u)
        return concatenate([dh, dhu])

    return rhs


def swe1d_rhs(state, gop, params, upwind=None, form="skew"):
    """Tendency of the 1D shallow water scheme for a state object."""
    out = make_swe1d_rhs(gop, params, upwind, form)(state.pack())
    return SweState1D.unpack(out)


@dataclass
class TensorMesh2D:
    """Tensor product of two periodic 1D meshes (x varies along axis 0)."""
    mesh_x: Mesh1D
    mesh_y: Mesh1D

    @property
    def shape(self):
        return (self.mesh_x.n_total, self.mesh_y.n_total)

    @property
    def grids(self):
        return np.meshgrid(self.mesh_x.coordinates, self.mesh_y.coordinates,
                           indexing="ij")


@dataclass
class Upwind2D:
    """Directional upwind data: interface rows (n_iface, K_transverse, 3)
    and per-element volume amplitudes (K_normal, K_transverse, 3)."""
    upsilon: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        self.upsilon = np.asarray(self.upsilon, dtype=float)
        self.gamma = np.asarray(self.gamma, dtype=float)
        if np.any(self.upsilon < 0.0) or np.any(self.gamma < 0.0):
            raise ValueError("upwind parameters must be nonnegative")

    def scaled(self, interface=1.0, volume=1.0):
        return Upwind2D(interface * self.upsilon, volume * self.gamma)


def zero_upwind_2d(gop_x, gop_y):
    Kx = gop_x.mesh.n_elements
    Ky = gop_y.mesh.n_elements
    return (Upwind2D(np.zeros((Kx, Ky, 3)), np.zeros((Kx, Ky, 3))),
            Upwind2D(np.zeros((Ky, Kx, 3)), np.zeros((Ky, Kx, 3))))


def swe2d_upwind_params(state, gop_x, gop_y, g):
    """Per-direction upwind amplitudes from a 2D base state.

    In each direction the mass parameter uses the normal velocity; the
    momentum parameters use max|hu| for the hu equation and max|hv| for the
    hv equation (the transverse component mirrors the normal one).
    Elements are the tensor blocks; interface rows average over the two
    adjacent blocks and are resolved per transverse element.
    """
    _check_height(state.h)
    Kx = gop_x.mesh.n_elements
    Ky = gop_y.mesh.n_elements
    nx = gop_x.mesh.pair.n_nodes
    ny = gop_y.mesh.pair.n_nodes
    h = state.h
    u = state.u
    v = state.v

    def block_max(fld):
        return np.abs(fld).reshape(Kx, nx, Ky, ny).max(axis=(1, 3))

    u1x = block_max(h * (np.abs(u) + np.sqrt(g * h)) / (h * g + u * u))
    u1y = block_max(h * (np.abs(v) + np.sqrt(g * h)) / (h * g + v * v))
    u2 = block_max(state.hu)
    u3 = block_max(state.hv)

    pex = np.stack([u1x, u2, u3], axis=-1)
    pey = np.stack([u1y, u2, u3], axis=-1)
    ups_x = np.array([0.5 * (pex[k] + pex[k2])
                      for (_, _, k, k2) in gop_x.interfaces])
    ups_y = np.array([0.5 * (pey[:, k] + pey[:, k2])
                      for (_, _, k, k2) in gop_y.interfaces])
    return (Upwind2D(ups_x, pex), Upwind2D(ups_y, pey.transpose(1, 0, 2)))


def _interface_selectors(gop):
    n = gop.D.shape[0]
    nI = len(gop.interfaces)
    Sa = np.zeros((nI, n))
    Sb = np.zeros((nI, n))
    for i, (a, b, _, _) in enumerate(gop.interfaces):
        Sa[i, a] = 1.0
        Sb[i, b] = 1.0
    return Sa, Sb


def _expand_weights(ups_component, n_transverse_nodes):
    """Per-interface, per-transverse-element weights -> per-node columns."""
    return np.repeat(ups_component, n_transverse_nodes, axis=1)


def make_swe2d_rhs(gop_x, gop_y, params, upwind_x=None, upwind_y=None,
                   form="skew"):
    """Tendency closure on packed [h, hu, hv] tensor-product fields.

    Dimension-by-dimension skew transport with per-direction interface and
    volume upwinding on the entropy variables (phi, u, v) and an optional
    Coriolis source.  form = "conservative" is the penalty-free flux form.
    upwind_x = upwind_y = None (skew form) recomputes the penalty
    amplitudes from the instantaneous state on every call; that path
    rejects dual inputs.
    """
    if form not in ("skew", "conservative"):
        raise ValueError("unknown form %r" % (form,))
    if (upwind_x is None) != (upwind_y is None):
        raise ValueError("pass both upwind matrices or neither")
    Dx, Dsx = gop_x.D, gop_x.Ds
    Dy, Dsy = gop_y.D, gop_y.Ds
    nx = gop_x.D.shape[0]
    ny = gop_y.D.shape[0]
    nnx = gop_x.mesh.pair.n_nodes
    nny = gop_y.mesh.pair.n_nodes
    hx = gop_x.hdiag
    hy = gop_y.hdiag
    g = params.g
    f = params.f_coriolis
    shape = (nx, ny)
    use_penalty = form == "skew"
    adaptive = use_penalty and upwind_x is None

    SaX, SbX = _interface_selectors(gop_x)
    SaY, SbY = _interface_selectors(gop_y)
    JX = SbX - SaX
    JY = SbY - SaY
    BX = (SaX - SbX).T
    BY = (SaY - SbY).T
    inv_hx = (0.5 / hx)[:, None]
    inv_hy = (0.5 / hy)[None, :]

    def penalty_tables(up_x, up_y):
        # per-interface x per-node weight tables, one per penalized
        # component, plus per-node volume amplitude maps
        wx = [_expand_weights(up_x.upsilon[:, :, c], nny) for c in range(3)]
        wy = [_expand_weights(up_y.upsilon[:, :, c], nnx).T
              for c in range(3)]
        gx = [np.repeat(np.repeat(up_x.gamma[:, :, c], nnx, axis=0),
                        nny, axis=1) for c in range(3)]
        gy = [np.repeat(np.repeat(up_y.gamma[:, :, c].T, nnx, axis=0),
                        nny, axis=1) for c in range(3)]
        return wx, wy, gx, gy

    if use_penalty and not adaptive:
        frozen_tables = penalty_tables(upwind_x, upwind_y)

    def dX(fld):
        return apply_matrix(Dx, fld, 0)

    def dY(fld):
        return apply_matrix(Dy, fld, 1)

    def penalty_x(gvar, w, c):
        jumps = apply_matrix(JX, gvar, 0)
        return inv_hx * apply_matrix(BX, w[c] * jumps, 0)

    def penalty_y(gvar, w, c):
        jumps = apply_matrix(JY, gvar, 1)
        return inv_hy * apply_matrix(BY, w[c] * jumps, 1)

    def rhs(q, t=0.0):
        n = nx * ny
        h = q[:n].reshape(shape)
        hu = q[n:2 * n].reshape(shape)
        hv = q[2 * n:].reshape(shape)
        _check_height(h, "in swe2d rhs")
        u = hu / h
        v = hv / h
        if form == "skew":
            dh = -(dX(hu) + dY(hv))
            dhu = -(0.5 * (dX(hu * u) + u * dX(hu) + hu * dX(u))
                    + g * h * dX(h)
                    + 0.5 * (dY(hv * u) + u * dY(hv) + hv * dY(u)))
            dhv = -(0.5 * (dX(hu * v) + v * dX(hu) + hu * dX(v))
                    + 0.5 * (dY(hv * v) + v * dY(hv) + hv * dY(v))
                    + g * h * dY(h))
        else:
            dh = -(dX(hu) + dY(hv))
            dhu = -(dX(hu * u + 0.5 * g * h * h) + dY(hv * u))
            dhv = -(dX(hu * v) + dY(hv * v + 0.5 * g * h * h))
        if f != 0.0:
            dhu = dhu + f * hv
            dhv = dhv - f * hu
        if use_penalty:
            if adaptive:
                if isinstance(q, Dual):
                    raise NonSmoothPoint(
                        "adaptive upwind amplitudes are not differentiable;"
                        " linearize with frozen upwind matrices")
                wx, wy, gx_map, gy_map = penalty_tables(
                    *swe2d_upwind_params(SweState2D(h, hu, hv),
                                         gop_x, gop_y, g))
            else:
                wx, wy, gx_map, gy_map = frozen_tables
            phi = g * h - 0.5 * (u * u + v * v)
            dh = dh + penalty_x(phi, wx, 0) + penalty_y(phi, wy, 0) \
                + gx_map[0] * apply_matrix(Dsx, phi, 0) \
                + gy_map[0] * apply_matrix(Dsy, phi, 1)
            dhu = dhu + penalty_x(u, wx, 1) + penalty_y(u, wy, 1) \
                + gx_map[1] * apply_matrix(Dsx, u, 0) \
                + gy_map[1] * apply_matrix(Dsy, u, 1)
            dhv = dhv + penalty_x(v, wx, 2) + penalty_y(v, wy, 2) \
                + gx_map[2] * apply_matrix(Dsx, v, 0) \
                + gy_map[2] * apply_matrix(Dsy, v, 1)
        return concatenate([dh.ravel(), dhu.ravel(), dhv.ravel()])

    return rhs


def swe2d_rhs(state, gop_x, gop_y, params, upwind_x=None, upwind_y=None,
              form="skew"):
    """Tendency of the 2D shallow water scheme for a state object."""
    out = make_swe2d_rhs(gop_x, gop_y, params, upwind_x, upwind_y,
                         form)(state.pack())
    return SweState2D.unpack(np.asarray(out), state.h.shape)


def entropy_rate_from_tendency(state, tendency, g, hdiag, hdiag_y=None):
    """dE/dt obtained by pairing the tendency with the entropy variables."""
    if isinstance(state, SweState2D):
        u, v, phi = swe_entropy_variables(state, g)
        w = hdiag[:, None] * hdiag_y[None, :]
        return float(np.sum(w * (phi * tendency.h + u * tendency.hu
                                 + v * tendency.hv)))
    u, phi = swe_entropy_variables(state, g)
    return float(np.sum(hdiag * (phi * tendency.h + u * tendency.hu)))


def entropy_rate_formula(state, g, upwind, gop=None, gops=None):
    """Predicted entropy rate of the skew scheme from the dissipation sums.

    1D (pass gop): -1/2 sum_i ups_1 [[phi]]^2 + ups_2 [[u]]^2 over
    interfaces, plus the volume contributions gamma_c <g_c, Ds g_c>_H per
    element.  2D (pass gops=(gop_x, gop_y, upwind_x, upwind_y)): the same
    sums per direction with transverse quadrature weights.
    """
    if isinstance(state, SweState2D):
        gop_x, gop_y, up_x, up_y = gops
        u, v, phi = swe_entropy_variables(state, g)
        hx, hy = gop_x.hdiag, gop_y.hdiag
        nnx = gop_x.mesh.pair.n_nodes
        nny = gop_y.mesh.pair.n_nodes
        comps = (phi, u, v)
        total = 0.0
        SaX, SbX = _interface_selectors(gop_x)
        SaY, SbY = _interface_selectors(gop_y)
        for c, gv in enumerate(comps):
            jx = (SbX - SaX) @ gv
            wxc = _expand_weights(up_x.upsilon[:, :, c], nny)
            total += -0.5 * float(np.sum(wxc * jx * jx * hy[None, :]))
            jy = gv @ (SbY - SaY).T
            wyc = _expand_weights(up_y.upsilon[:, :, c], nnx)
            total += -0.5 * float(np.sum(wyc.T * jy * jy * hx[:, None]))
            gxm = np.repeat(np.repeat(up_x.gamma[:, :, c], nnx, axis=0),
                            nny, axis=1)
            gym = np.repeat(np.repeat(up_y.gamma[:, :, c].T, nnx, axis=0),
                            nny, axis=1)
            total += float(np.sum(
                (hx[:, None] * hy[None, :]) * gv
                * (gxm * apply_matrix(gop_x.Ds, gv, 0)
                   + gym * apply_matrix(gop_y.Ds, gv, 1))))
        return total
    u, phi = swe_entropy_variables(state, g)
    hd = gop.hdiag
    n_nodes = gop.mesh.pair.n_nodes
    total = 0.0
    for c, gv in enumerate((phi, u)):
        jumps = np.array([gv[b] - gv[a] for (a, b, _, _) in gop.interfaces])
        total += -0.5 * float(np.sum(upwind.upsilon[:, c] * jumps * jumps))
        gmap = _element_map(upwind.gamma[:, c], n_nodes)
        total += float(np.sum(hd * gv * (gmap * (gop.Ds @ gv))))
    return total


def init_stationary_vortex(mesh2d, g):
    """Stationary vortex base state on [-pi, pi]^2.

    Streamfunction psi = exp(-r^2), velocities u = 2y psi, v = -2x psi, and
    height h = 12 + exp(-2 r^2)/g (the closed form of the cyclostrophic
    integral of (u^2 + v^2)/(s g)).
    """
    X, Y = mesh2d.grids
    r2 = X * X + Y * Y
    psi = np.exp(-r2)
    u = 2.0 * Y * psi
    v = -2.0 * X * psi
    h = 12.0 + np.exp(-2.0 * r2) / g
    return SweState2D(h, h * u, h * v)


def init_kelvin_helmholtz(mesh2d, params):
    """Barotropic double-jet shear state with Gaussian height bumps.

    u0 = u_bar0 (sech((y - y_plus)/1e6) - sech((y - y_minus)/1e6)) with
    jets at y = 0.25 L and 0.75 L; v0 = 0; h0 = H - (f/g) I(y) + bumps,
    where I(y) = int_0^y u0 is evaluated in closed form via the
    Gudermannian antiderivative of sech, and the bumps are
    h_bar0 exp(-k ((x - x_i)^2 + (y - y_i)^2)/L^2) at (0.15 L, y_plus)
    and (0.85 L, y_minus).
    """
    L = params.L_domain
    w = 1.0e6
    y_plus = 0.25 * L
    y_minus = 0.75 * L
    X, Y = mesh2d.grids

    sech = lambda s: 1.0 / np.cosh(s)
    u0 = params.u_bar0 * (sech((Y - y_plus) / w) - sech((Y - y_minus) / w))

    def gd(s):
        return np.arctan(np.sinh(s))

    def jet_integral(y):
        ip = w * (gd((y - y_plus) / w) - gd((0.0 - y_plus) / w))
        im = w * (gd((y - y_minus) / w) - gd((0.0 - y_minus) / w))
        return params.u_bar0 * (ip - im)

    h0 = params.H_mean - (params.f_coriolis / params.g) * jet_integral(Y)
    for (xi, yi) in ((0.15 * L, y_plus), (0.85 * L, y_minus)):
        d = ((X - xi) ** 2 + (Y - yi) ** 2) / L ** 2
        h0 = h0 + params.h_bar0 * np.exp(-params.k_bump * d)
    return SweState2D(h0, h0 * u0, np.zeros_like(h0))
