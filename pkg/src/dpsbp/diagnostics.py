"""Norms, entropy functionals, vorticity, and turbulence spectra.

The kinetic-energy spectrum follows the shell-sum convention: nodal fields
are resampled to a uniform M x M grid (element-local polynomial evaluation,
M a power of two), transformed with an iterative radix-2 FFT, and summed
over integer shells n <= |k| < n+1.  DFT coefficients are scaled by 1/M^2
so that Parseval reads sum_n E_n = mean(u^2 + v^2)/2.  The enstrophy
spectrum is the shell-wise multiple n^2 E_n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (EmptyWindow, NonPositiveHeight, ResampleFailure,
                     SizeMismatch)
from .linearize import apply_matrix
from .swe import SweState1D, SweState2D

__all__ = ["h_norm", "total_entropy", "vorticity", "fft_radix2",
           "ifft_radix2", "fft2_radix2", "resample_to_uniform",
           "resample_2d", "SpectrumCurve", "kinetic_energy_spectrum",
           "enstrophy_spectrum", "slope_fit"]


def h_norm(u, hdiag, hdiag_y=None):
    """Quadrature-weighted norm sqrt(u^T H u); 2D fields use H_x x H_y."""
    u = np.asarray(u, dtype=float)
    hdiag = np.asarray(hdiag, dtype=float)
    if hdiag_y is not None:
        hdiag_y = np.asarray(hdiag_y, dtype=float)
        if u.shape != (len(hdiag), len(hdiag_y)):
            raise SizeMismatch("field shape %s does not match weights (%d, %d)"
                               % (u.shape, len(hdiag), len(hdiag_y)))
        return float(np.sqrt(np.sum(
            (hdiag[:, None] * hdiag_y[None, :]) * u * u)))
    if u.shape != hdiag.shape:
        raise SizeMismatch("field shape %s does not match weights %s"
                           % (u.shape, hdiag.shape))
    return float(np.sqrt(np.sum(hdiag * u * u)))


def total_entropy(state, hdiag, g=None, hdiag_y=None):
    """Total discrete entropy <1, e>_H.

    e = u^2 for a plain nodal array (Burgers), (h u^2 + g h^2)/2 for
    SweState1D, and (h u^2 + h v^2 + g h^2)/2 for SweState2D.
    """
    if isinstance(state, SweState2D):
        h = state.h
        if np.min(h) <= 0.0:
            raise NonPositiveHeight("entropy of a state with h <= 0")
        e = 0.5 * ((state.hu ** 2 + state.hv ** 2) / h + g * h * h)
        w = np.asarray(hdiag)[:, None] * np.asarray(hdiag_y)[None, :]
        return float(np.sum(w * e))
    if isinstance(state, SweState1D):
        h = state.h
        if np.min(h) <= 0.0:
            raise NonPositiveHeight("entropy of a state with h <= 0")
        e = 0.5 * (state.hu ** 2 / h + g * h * h)
        return float(np.sum(np.asarray(hdiag) * e))
    u = np.asarray(state, dtype=float)
    return float(np.sum(np.asarray(hdiag) * u * u))


def vorticity(state, gop_x, gop_y):
    """Nodal curl omega = D_x v - D_y u using the central operator parts."""
    u = state.u
    v = state.v
    return apply_matrix(gop_x.D, v, 0) - apply_matrix(gop_y.D, u, 1)


def _bit_reversal(n):
    idx = np.arange(n)
    rev = np.zeros(n, dtype=int)
    bits = n.bit_length() - 1
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def fft_radix2(x, axis=-1):
    """Iterative radix-2 decimation-in-time FFT along one axis.

    The length along the transform axis must be a power of two.
    """
    x = np.asarray(x, dtype=complex)
    x = np.moveaxis(x, axis, -1)
    n = x.shape[-1]
    if n == 0 or n & (n - 1):
        raise ValueError("transform length %d is not a power of two" % n)
    out = x[..., _bit_reversal(n)].copy()
    m = 1
    while m < n:
        m2 = 2 * m
        w = np.exp(-2j * np.pi * np.arange(m) / m2)
        blocks = out.reshape(out.shape[:-1] + (n // m2, m2))
        even = blocks[..., :m]
        odd = blocks[..., m:] * w
        out = np.concatenate([even + odd, even - odd],
                             axis=-1).reshape(out.shape)
        m = m2
    return np.moveaxis(out, -1, axis)


def ifft_radix2(x, axis=-1):
    """Inverse of fft_radix2 (1/n normalization on the inverse)."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[axis]
    return np.conj(fft_radix2(np.conj(x), axis=axis)) / n


def fft2_radix2(a):
    """2D FFT of a (M, M) or (Mx, My) array via row and column passes."""
    return fft_radix2(fft_radix2(a, axis=0), axis=1)


def _barycentric_weights(nodes):
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def resample_to_uniform(values, mesh, m):
    """Evaluate element-local nodal polynomials on m uniform points.

    Targets are x_j = origin + j * length/m (periodic grid, right endpoint
    excluded).  Exact for polynomial data of element degree; raises
    ResampleFailure for invalid target sizes.
    """
    values = np.asarray(values, dtype=float)
    if m < 2:
        raise ResampleFailure("need at least two target points, got %d" % m)
    K = mesh.n_elements
    n = mesh.pair.n_nodes
    if values.shape[0] != K * n:
        raise ResampleFailure(
            "field has %d nodes, mesh has %d" % (values.shape[0], K * n))
    L_el = mesh.pair.element_length
    nodes = mesh.pair.nodes
    wbar = _barycentric_weights(nodes)
    targets = mesh.origin + np.arange(m) * (mesh.length / m)
    out = np.empty((m,) + values.shape[1:])
    elem = np.minimum(((targets - mesh.origin) // L_el).astype(int), K - 1)
    local = targets - mesh.origin - elem * L_el
    for j in range(m):
        vals = values[elem[j] * n:(elem[j] + 1) * n]
        d = local[j] - nodes
        hit = np.flatnonzero(np.abs(d) < 1e-13 * max(L_el, 1.0))
        if hit.size:
            out[j] = vals[hit[0]]
        else:
            c = wbar / d
            out[j] = (c @ vals) / np.sum(c)
    return out


def resample_2d(field, mesh_x, mesh_y, m):
    """Resample a tensor-product nodal field to a uniform m x m grid."""
    fx = resample_to_uniform(np.asarray(field, dtype=float), mesh_x, m)
    return resample_to_uniform(fx.T, mesh_y, m).T


@dataclass
class SpectrumCurve:
    """Shell-integrated spectrum: E[i] is the density of shell n[i]."""
    n: np.ndarray
    E: np.ndarray


def _shell_sum(power, m):
    k = _wavenumbers(m)
    kx = k[:, None]
    ky = k[None, :]
    mag = np.sqrt(kx * kx + ky * ky)
    # cover the corner modes |k| up to sqrt(2) m/2 so Parseval is exact
    n_max = int(np.floor(np.sqrt(2.0) * (m // 2)))
    shells = np.arange(n_max + 1)
    E = np.zeros(n_max + 1)
    idx = np.floor(mag).astype(int)
    np.add.at(E, idx, power)
    return shells, E


def _wavenumbers(m):
    k = np.arange(m)
    k[k > m // 2] -= m
    return k.astype(float)


def kinetic_energy_spectrum(u, v, mesh_x=None, mesh_y=None, m=None):
    """Shell-integrated kinetic energy spectrum of a 2D velocity field.

    Nodal fields are resampled to a uniform m x m grid when meshes are
    given (m defaults to the next power of two covering the grid); already
    uniform arrays can be passed with mesh_x = mesh_y = None.  Shell n
    collects (|u_hat|^2 + |v_hat|^2)/2 / m^4 over n <= |k| < n + 1.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if mesh_x is not None:
        if m is None:
            m = 1 << (max(u.shape) - 1).bit_length()
        u = resample_2d(u, mesh_x, mesh_y, m)
        v = resample_2d(v, mesh_x, mesh_y, m)
    else:
        if u.shape[0] != u.shape[1]:
            raise ResampleFailure("uniform spectra need a square grid")
        m = u.shape[0]
    if m & (m - 1):
        raise ResampleFailure("FFT grid size %d is not a power of two" % m)
    uh = fft2_radix2(u)
    vh = fft2_radix2(v)
    power = 0.5 * (np.abs(uh) ** 2 + np.abs(vh) ** 2) / float(m) ** 4
    shells, E = _shell_sum(power, m)
    return SpectrumCurve(n=shells, E=E)


def enstrophy_spectrum(curve):
    """Shell-wise enstrophy spectrum E_omega,n = n^2 E_n."""
    return SpectrumCurve(n=curve.n.copy(), E=curve.n.astype(float) ** 2
                         * curve.E)


def slope_fit(curve, n_lo, n_hi):
    """Least-squares slope of log E versus log n over n_lo <= n <= n_hi."""
    if not n_hi > n_lo >= 1:
        raise EmptyWindow("need n_hi > n_lo >= 1, got [%s, %s]"
                          % (n_lo, n_hi))
    mask = (curve.n >= n_lo) & (curve.n <= n_hi) & (curve.E > 0.0)
    if int(np.count_nonzero(mask)) < 2:
        raise EmptyWindow("fewer than two positive shells in [%d, %d]"
                          % (n_lo, n_hi))
    return float(np.polyfit(np.log(curve.n[mask].astype(float)),
                            np.log(curve.E[mask]), 1)[0])
