"""Dual-pairing summation-by-parts operator pairs on a single element.

A pair (D+, D-) of upwind/downwind differentiation matrices together with a
diagonal positive quadrature H and the boundary matrix B = diag(-1, 0, ..., 1)
satisfies, on one element of length L with n nodes,

    A.1  H is diagonal positive and integrates polynomials exactly up to the
         family's quadrature degree,
    A.2  D+- differentiate monomials exactly up to the certified degree
         (interior rows for finite-difference families, all rows for DG),
    A.3  H D+ + (H D-)^T = B,
    A.4  <f, (D+ - D-) f>_H <= 0 for all f.

The central part D = (D+ + D-)/2 and dissipation part Ds = (D+ - D-)/2
satisfy D+- = D +- Ds with H Ds symmetric negative semi-definite.

Finite-difference pairs use interpolatory upwind interior stencils and
boundary closures solved from the accuracy and quadrature conditions in exact
rational arithmetic.  DG pairs live on Legendre-Gauss-Lobatto nodes with an
exact differentiation matrix and a rank-one dissipation aligned with the
highest Legendre mode.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidDegree, TooFewNodes, UnsupportedOrder

__all__ = [
    "FD_UPWIND", "FD_DRP", "DG_LGL", "CENTRAL",
    "OperatorPair", "OperatorSplit", "AxiomReport",
    "build_fd_pair", "build_dg_pair", "central_pair", "split",
    "audit_axioms", "export_text", "import_text", "operator_hash",
    "lgl_nodes_weights", "EDGE_BOOST", "MAX_FD_ORDER", "DG_MODAL_SCALE",
]

FD_UPWIND = "FD_UPWIND"
FD_DRP = "FD_DRP"
DG_LGL = "DG_LGL"
CENTRAL = "CENTRAL"

MAX_FD_ORDER = 9

# Default strength of the rank-one DG modal dissipation: Kdiss = c l l^T
# with |l|_H^2 = DG_MODAL_SCALE * p (p+1) / L.  See build_dg_pair.
DG_MODAL_SCALE = 10.0

# Per-order multiplier applied to the first/last M rows of the difference
# factor inside Ds.  Calibrated (see tests) so that the optimal volume-upwind
# amplitude removes the interface-localized unstable modes of the split-form
# Burgers linearization while half that amplitude visibly does not.
EDGE_BOOST = {1: 1.0, 2: 1.0, 3: 2.0, 4: 1.0, 5: 8.0, 6: 2.0, 7: 32.0,
              8: 32.0, 9: 64.0}

# Boundary-closure ladder results (rows r, quadrature degree qd) per interior
# order for the upwind family: the smallest r and largest qd for which the
# closure system is solvable with strictly positive quadrature weights.
_CLOSURE_LADDER = {1: (2, 1), 2: (4, 1), 3: (4, 3), 4: (6, 3), 5: (6, 5),
                   6: (8, 5), 7: (8, 7), 8: (10, 7), 9: (11, 9)}


# ---------------------------------------------------------------------------
# exact rational linear algebra
# ---------------------------------------------------------------------------

def _rref(M):
    """Reduced row echelon form over Fractions; returns (matrix, pivot cols)."""
    M = [row[:] for row in M]
    rows, cols = len(M), len(M[0])
    piv = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = None
        for i in range(r, rows):
            if M[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = Fraction(1) / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M, piv


def _solve_affine(A, b):
    """General rational solution of A x = b.

    Returns (particular, nullspace basis) or None if inconsistent.
    """
    m, n = len(A), len(A[0])
    Ab = [A[i][:] + [b[i]] for i in range(m)]
    R, piv = _rref(Ab)
    for row in R:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    piv = [c for c in piv if c < n]
    part = [Fraction(0)] * n
    for i, c in enumerate(piv):
        part[c] = R[i][-1]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][fcol]
        basis.append(v)
    return part, basis


def _min_norm(part, basis):
    """Exact minimum-norm representative of the affine solution set."""
    if not basis:
        return part
    k = len(basis)
    G = [[sum(basis[a][i] * basis[c][i] for i in range(len(part)))
          for c in range(k)] for a in range(k)]
    rhs = [-sum(basis[a][i] * part[i] for i in range(len(part)))
           for a in range(k)]
    t, _ = _solve_affine(G, rhs)
    out = part[:]
    for a in range(k):
        for i in range(len(part)):
            out[i] += t[a] * basis[a][i]
    return out


# ---------------------------------------------------------------------------
# interior stencils
# ---------------------------------------------------------------------------

def _dplus_stencil(p):
    """Interpolatory upwind-biased derivative stencil of interior order p.

    Offsets run from -(ceil(p/2) - 1) to floor(p/2) + 1 so that p + 1 nodes
    determine the derivative of the degree-p interpolant exactly.
    """
    lo = -((p + 1) // 2 - 1) if p % 2 else -(p // 2 - 1)
    hi = p // 2 + 1
    offs = list(range(lo, hi + 1))
    n = len(offs)
    A = [[Fraction(o) ** k for o in offs] for k in range(n)]
    b = [Fraction(0)] * n
    b[1] = Fraction(1)
    part, basis = _solve_affine(A, b)
    assert not basis
    return offs, part


def _split_stencils(p):
    """Full-width central and dissipation stencils for the upwind pair.

    D- is minus the reverse of D+; returns (offsets -M..M, central, diss).
    """
    offs, dp = _dplus_stencil(p)
    M = max(-offs[0], offs[-1])
    full = list(range(-M, M + 1))
    dpf = {o: c for o, c in zip(offs, dp)}
    dmf = {-o: -c for o, c in zip(offs, dp)}
    cen = [(dpf.get(o, Fraction(0)) + dmf.get(o, Fraction(0))) / 2
           for o in full]
    dis = [(dpf.get(o, Fraction(0)) - dmf.get(o, Fraction(0))) / 2
           for o in full]
    return full, cen, dis


def _drp_interior(p, n_quad=2048):
    """Dispersion-optimized antisymmetric interior stencil of degree p - 1.

    Same half width M as the order-p upwind pair; the single remaining free
    coefficient minimizes the integrated dispersion error of the modified
    wavenumber over 0 <= k dx <= pi/2.  The optimized coefficient is snapped
    to a nearby rational so the boundary closure can be solved exactly.
    """
    full, _, _ = _split_stencils(p)
    M = full[-1]
    # antisymmetric stencil c_m, m = 1..M; exactness on odd degrees < p
    odd_degrees = [k for k in range(1, p) if k % 2 == 1]
    A = [[Fraction(2) * Fraction(m) ** k for m in range(1, M + 1)]
         for k in odd_degrees]
    b = [Fraction(1) if k == 1 else Fraction(0) for k in odd_degrees]
    part, basis = _solve_affine(A, b)
    if len(basis) != 1:
        raise UnsupportedOrder(
            "DRP family needs exactly one free stencil parameter, "
            "order %d leaves %d" % (p, len(basis)))
    c0 = np.array([float(v) for v in part])
    nu = np.array([float(v) for v in basis[0]])
    xi = np.linspace(0.0, np.pi / 2, n_quad)
    m = np.arange(1, M + 1)
    sins = 2.0 * np.sin(np.outer(xi, m))
    s0 = sins @ c0 - xi
    sn = sins @ nu
    t_opt = -float(s0 @ sn) / float(sn @ sn)
    t_frac = Fraction(t_opt).limit_denominator(10 ** 7)
    coeff = [part[i] + t_frac * basis[0][i] for i in range(M)]
    cen = [-coeff[-1 - i] for i in range(M)] + [Fraction(0)] + coeff
    return full, cen


# ---------------------------------------------------------------------------
# boundary closures
# ---------------------------------------------------------------------------

def _closure_system(theta, M, r, tau, qd):
    """Affine system for the closure unknowns of a central interior stencil.

    Unknowns are x = (delta_0..delta_{r-1}, q_ij for j < i < r): quadrature
    weight perturbations w_i = 1 + delta_i (mirrored at the right end) and
    the strictly-lower skew entries of the boundary block of Q = H D - B/2.
    Conditions: quadrature exactness to degree qd for a family of grid sizes
    (forcing the polynomial identity), and accuracy of the first r rows of
    Theta = Q + B/2 on monomials up to degree tau.
    """
    qidx = {}
    for i in range(r):
        for j in range(i):
            qidx[(i, j)] = r + len(qidx)
    nun = r + len(qidx)
    A, b = [], []

    def ipow(base, k):
        return Fraction(base) ** k if k > 0 else Fraction(1)

    n0 = 2 * r + 2 * M + 2
    for k in range(qd + 1):
        for n in range(n0, n0 + qd + 2):
            N = n - 1
            row = [Fraction(0)] * nun
            const = sum(ipow(j, k) for j in range(n))
            for i in range(r):
                row[i] = ipow(i, k) + ipow(N - i, k)
            A.append(row)
            b.append(Fraction(N) ** (k + 1) / (k + 1) - const)
    for i in range(r):
        for k in range(tau + 1):
            row = [Fraction(0)] * nun
            const = Fraction(0)
            for j in range(r):
                if i == j:
                    continue
                cval = ipow(j, k)
                if (i, j) in qidx:
                    row[qidx[(i, j)]] += cval
                else:
                    row[qidx[(j, i)]] -= cval
            if i == 0 and k == 0:
                const += Fraction(-1, 2)
            for j in range(r, i + M + 1):
                o = j - i
                if o in theta:
                    const += theta[o] * ipow(j, k)
            kik = Fraction(0)
            if k == 1:
                kik = Fraction(1)
            elif k >= 2 and i > 0:
                kik = Fraction(k) * Fraction(i) ** (k - 1)
            row[i] -= kik
            A.append(row)
            b.append(kik - const)
    return A, b, qidx


def _solve_closure(theta, M, tau, r_qd=None):
    """Solve the closure ladder; returns (r, qd, x, qidx).

    If r_qd is given it is tried directly, otherwise the ladder searches the
    smallest boundary width r and the largest quadrature degree qd that admit
    strictly positive weights.  The affine family is resolved to its
    minimum-norm representative.
    """
    def attempt(r, qd):
        A, b, qidx = _closure_system(theta, M, r, tau, qd)
        sol = _solve_affine(A, b)
        if sol is None:
            return None
        x = _min_norm(*sol)
        if min(1 + x[i] for i in range(r)) <= 0:
            return None
        return x, qidx

    if r_qd is not None:
        r, qd = r_qd
        got = attempt(r, qd)
        if got is not None:
            return r, qd, got[0], got[1]
    for r in range(max(2 * M, tau + 1), 2 * M + 10):
        for qd in range(2 * M - 1, tau - 1, -1):
            got = attempt(r, qd)
            if got is not None:
                return r, qd, got[0], got[1]
    raise UnsupportedOrder(
        "no positive-weight closure found (M=%d, tau=%d)" % (M, tau))


_fd_cache = {}


def _fd_blueprint(order, family):
    """Cached dimensionless ingredients of an FD pair of a given family."""
    key = (order, family)
    if key in _fd_cache:
        return _fd_cache[key]
    if family == FD_UPWIND:
        full, cen, dis = _split_stencils(order)
        tau = (order + 1) // 2 if order % 2 else order // 2
        ladder = _CLOSURE_LADDER.get(order)
        certified = order
    else:
        full, cen = _drp_interior(order)
        _, _, dis = _split_stencils(order)
        tau = max(1, (order - 1 + 1) // 2 if (order - 1) % 2 else (order - 1) // 2)
        ladder = None
        certified = order - 1
    M = full[-1]
    theta = {o: c for o, c in zip(full, cen)}
    r, qd, x, qidx = _solve_closure(theta, M, tau, ladder)
    bp = {
        "full": full, "cen": cen, "dis": dis, "M": M, "r": r, "qd": qd,
        "tau": tau, "x": x, "qidx": qidx, "certified": certified,
    }
    _fd_cache[key] = bp
    return bp


# ---------------------------------------------------------------------------
# operator pair containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorPair:
    """Single-element dual-pairing SBP operator pair.

    nodes live on [0, element_length]; H is the full diagonal quadrature
    matrix (units of length), Dplus/Dminus have units 1/length, and B is
    diag(-1, 0, ..., 0, 1).  certified_degree is the monomial degree up to
    which D+- are exact (on interior_rows for FD families, all rows
    otherwise); quad_degree is the exactness degree of H.
    """
    family: str
    interior_order: int
    n_nodes: int
    element_length: float
    nodes: np.ndarray
    Dplus: np.ndarray
    Dminus: np.ndarray
    H: np.ndarray
    B: np.ndarray
    certified_degree: int
    quad_degree: int
    interior_rows: tuple = field(default=(0, 0))

    def __post_init__(self):
        for name in ("nodes", "Dplus", "Dminus", "H", "B"):
            getattr(self, name).setflags(write=False)

    @property
    def hdiag(self):
        return np.diag(self.H)

    @property
    def dx_min(self):
        return float(np.min(np.diff(self.nodes)))


@dataclass(frozen=True)
class OperatorSplit:
    """Central/dissipation split D = (D+ + D-)/2, Ds = (D+ - D-)/2."""
    D: np.ndarray
    Ds: np.ndarray


def split(pair):
    """Exact central/dissipation split of an operator pair."""
    D = 0.5 * (pair.Dplus + pair.Dminus)
    Ds = 0.5 * (pair.Dplus - pair.Dminus)
    return OperatorSplit(D=D, Ds=Ds)


# ---------------------------------------------------------------------------
# finite-difference pairs
# ---------------------------------------------------------------------------

def build_fd_pair(interior_order, n_nodes, element_length, family=FD_UPWIND):
    """Build a finite-difference DP-SBP pair on a uniform node set.

    Parameters
    ----------
    interior_order : int
        Interior accuracy order p, 1 <= p <= 9 for the upwind family
        (2 <= p <= 6 for the dispersion-optimized family, certified p - 1).
    n_nodes : int
        Nodes per element including both endpoints.
    element_length : float
        Physical element length; nodes are equidistant on [0, length].
    family : str
        FD_UPWIND (default) or FD_DRP.
    """
    if family not in (FD_UPWIND, FD_DRP):
        raise UnsupportedOrder("unknown FD family %r" % (family,))
    if family == FD_UPWIND and not 1 <= interior_order <= MAX_FD_ORDER:
        raise UnsupportedOrder(
            "FD upwind interior order must be in 1..%d, got %r"
            % (MAX_FD_ORDER, interior_order))
    if family == FD_DRP and not 2 <= interior_order <= 6:
        raise UnsupportedOrder(
            "FD DRP interior order must be in 2..6, got %r" % (interior_order,))
    if element_length <= 0:
        raise ValueError("element_length must be positive")
    bp = _fd_blueprint(interior_order, family)
    M, r = bp["M"], bp["r"]
    n_min = max(2 * r, 3 * M)
    if n_nodes < n_min:
        raise TooFewNodes(
            "order %d needs at least %d nodes, got %d"
            % (interior_order, n_min, n_nodes))
    n = n_nodes
    dx = element_length / (n - 1)
    xf = np.array([float(v) for v in bp["x"]])
    w = np.ones(n)
    for i in range(r):
        w[i] += xf[i]
        w[n - 1 - i] += xf[i]

    Q = np.zeros((n, n))
    cend = {o: float(c) for o, c in zip(bp["full"], bp["cen"])}
    for i in range(r, n - r):
        for o, c in cend.items():
            Q[i, i + o] = c
    for (i, j), ix in bp["qidx"].items():
        Q[i, j] = xf[ix]
        Q[j, i] = -xf[ix]
    for i in range(r):
        for j in range(r, i + M + 1):
            o = j - i
            if o in cend:
                Q[i, j] = cend[o]
                Q[j, i] = -cend[o]
    for i in range(r):
        for j in range(0, r + M + 1):
            Q[n - 1 - i, n - 1 - j] = -Q[i, j]

    B = np.zeros((n, n))
    B[0, 0] = -1.0
    B[-1, -1] = 1.0
    Theta = Q + 0.5 * B

    # dissipation: S = -(Delta^M)^T C (Delta^M) with edge-boosted weights
    cfar = abs(float(bp["dis"][-1]))
    Dm = np.zeros((n - M, n))
    for i in range(n - M):
        for j in range(M + 1):
            Dm[i, i + j] = (-1) ** (M - j) * math.comb(M, j)
    beta = EDGE_BOOST.get(interior_order, 1.0) if family == FD_UPWIND else 1.0
    C = 2.0 * cfar * np.ones(n - M)
    C[:M] *= beta
    C[-M:] *= beta
    S = -(Dm.T * C) @ Dm

    wdx = w * dx
    Dplus = (Theta + 0.5 * S) / wdx[:, None]
    Dminus = (Theta - 0.5 * S) / wdx[:, None]
    H = np.diag(wdx)
    nodes = np.arange(n) * dx
    lo = max(r, 2 * M if beta != 1.0 else M)
    interior = (lo, n - lo) if n - lo > lo else (0, 0)
    return OperatorPair(
        family=family, interior_order=interior_order, n_nodes=n,
        element_length=float(element_length), nodes=nodes, Dplus=Dplus,
        Dminus=Dminus, H=H, B=B, certified_degree=bp["certified"],
        quad_degree=bp["qd"], interior_rows=interior)


# ---------------------------------------------------------------------------
# DG pairs on LGL nodes
# ---------------------------------------------------------------------------

def lgl_nodes_weights(p):
    """Legendre-Gauss-Lobatto nodes and weights on [-1, 1] for degree p."""
    from numpy.polynomial import legendre as leg
    if p < 1:
        raise InvalidDegree("LGL degree must be >= 1, got %r" % (p,))
    c = np.zeros(p + 1)
    c[-1] = 1.0
    if p == 1:
        xi = np.array([-1.0, 1.0])
    else:
        xi = np.sort(np.concatenate([[-1.0, 1.0], leg.legroots(leg.legder(c))]))
    Pp = leg.legval(xi, c)
    wi = 2.0 / (p * (p + 1) * Pp ** 2)
    return xi, wi


def _barycentric_dmat(xi):
    """Exact nodal differentiation matrix via barycentric weights."""
    n = len(xi)
    bw = np.ones(n)
    for j in range(n):
        for k in range(n):
            if k != j:
                bw[j] /= (xi[j] - xi[k])
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = bw[j] / bw[i] / (xi[i] - xi[j])
        D[i, i] = -np.sum(D[i])
    return D


def build_dg_pair(degree, dissipation_strength, element_length=1.0,
                  modal_scale=None):
    """Build a DG pair on LGL nodes with rank-one modal dissipation.

    D is the exact differentiation matrix of the degree-p nodal polynomial;
    D+- = D -+ H^{-1} Kdiss with Kdiss = c * l l^T, where l is the
    H-weighted, H-normalized degree-p Legendre mode scaled by
    sqrt(modal_scale * p (p+1) / L).  Kdiss is PSD and annihilates
    polynomials of degree <= p - 1, so for c > 0 the pair differentiates
    exactly to degree p - 1 (degree p when c = 0); the central part is
    always exact to p.

    modal_scale defaults to DG_MODAL_SCALE, a calibration constant chosen
    so that c = 0.1 volume upwinding damps unresolved modes at a rate
    comparable to the grid-scale transport rate: large enough that
    optimally scaled upwinding renders linearized spectra nonpositive,
    small enough that explicit time stepping at transport-limited steps
    remains inside the integrator's stability region.
    """
    from numpy.polynomial import legendre as leg
    if not isinstance(degree, int) or degree < 1:
        raise InvalidDegree("DG degree must be an integer >= 1, got %r"
                            % (degree,))
    c = float(dissipation_strength)
    if c < 0:
        raise InvalidDegree("dissipation strength must be >= 0, got %r"
                            % (dissipation_strength,))
    L = float(element_length)
    if L <= 0:
        raise ValueError("element_length must be positive")
    xi, wi = lgl_nodes_weights(degree)
    n = degree + 1
    D = _barycentric_dmat(xi) * (2.0 / L)
    hall = wi * (L / 2.0)
    H = np.diag(hall)
    nodes = (xi + 1.0) * (L / 2.0)
    coeff = np.zeros(degree + 1)
    coeff[-1] = 1.0
    phi = leg.legval(xi, coeff)
    phi_hat = phi / math.sqrt(float(phi @ (hall * phi)))
    scale = DG_MODAL_SCALE if modal_scale is None else float(modal_scale)
    ell = math.sqrt(scale * degree * (degree + 1) / L) * (hall * phi_hat)
    Kdiss = c * np.outer(ell, ell)
    HinvK = Kdiss / hall[:, None]
    Dplus = D - HinvK
    Dminus = D + HinvK
    B = np.zeros((n, n))
    B[0, 0] = -1.0
    B[-1, -1] = 1.0
    certified = degree if c == 0.0 else degree - 1
    return OperatorPair(
        family=DG_LGL, interior_order=degree, n_nodes=n, element_length=L,
        nodes=nodes, Dplus=Dplus, Dminus=Dminus, H=H, B=B,
        certified_degree=certified, quad_degree=2 * degree - 1,
        interior_rows=(0, n))


def central_pair(pair):
    """Central (dissipation-free) pair sharing the quadrature of `pair`."""
    sp = split(pair)
    return OperatorPair(
        family=CENTRAL, interior_order=pair.interior_order,
        n_nodes=pair.n_nodes, element_length=pair.element_length,
        nodes=pair.nodes.copy(), Dplus=sp.D.copy(), Dminus=sp.D.copy(),
        H=pair.H.copy(), B=pair.B.copy(),
        certified_degree=pair.certified_degree, quad_degree=pair.quad_degree,
        interior_rows=pair.interior_rows)


# ---------------------------------------------------------------------------
# axiom audit
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    """Residuals and verdicts of the four operator axioms."""
    family: str
    interior_order: int
    n_nodes: int
    trials: int
    tol: float
    a1_sum_residual: float = 0.0
    a1_quad_residual: float = 0.0
    a1_pass: bool = False
    a2_residual: float = 0.0
    a2_degree: int = 0
    a2_rows_checked: int = 0
    a2_pass: bool = False
    a3_residual: float = 0.0
    a3_pass: bool = False
    a4_worst_form: float = 0.0
    a4_eig_max: float = 0.0
    a4_pass: bool = False

    @property
    def passed(self):
        return self.a1_pass and self.a2_pass and self.a3_pass and self.a4_pass

    def as_dict(self):
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def audit_axioms(pair, trials=1000, tol=1e-11, seed=0):
    """Audit axioms A.1-A.4 of an operator pair.

    A.1 checks the quadrature row sum against the element length and monomial
    integrals up to the pair's quadrature degree; A.2 differentiates centered,
    scaled monomials up to the certified degree (interior rows for FD
    families); A.3 is the matrix identity H D+ + (H D-)^T = B; A.4 evaluates
    the dissipation quadratic form on `trials` random vectors and the extreme
    eigenvalue of the symmetrized form.
    """
    rep = AxiomReport(family=pair.family, interior_order=pair.interior_order,
                      n_nodes=pair.n_nodes, trials=trials, tol=tol)
    n = pair.n_nodes
    L = pair.element_length
    hseq = pair.hdiag

    # A.1: positivity, total measure, quadrature exactness on [-1, 1] coords
    t = 2.0 * pair.nodes / L - 1.0
    rep.a1_sum_residual = abs(float(np.sum(hseq)) - L) / L
    qres = 0.0
    if np.all(hseq > 0):
        for k in range(pair.quad_degree + 1):
            exact = L / (k + 1) if k % 2 == 0 else 0.0
            got = float(hseq @ t ** k)
            qres = max(qres, abs(got - exact) / L)
        rep.a1_quad_residual = qres
        rep.a1_pass = rep.a1_sum_residual <= tol and qres <= max(tol, 1e-11)
    else:
        rep.a1_pass = False

    # A.2: monomial differentiation on certified rows, centered coordinates
    lo, hi = pair.interior_rows
    rows = np.arange(lo, hi)
    rep.a2_degree = pair.certified_degree
    rep.a2_rows_checked = len(rows)
    a2 = 0.0
    if len(rows):
        for k in range(pair.certified_degree + 1):
            mono = t ** k
            dmono = (k * t ** (k - 1) if k >= 1 else np.zeros(n)) * (2.0 / L)
            for Dop in (pair.Dplus, pair.Dminus):
                err = np.abs(Dop @ mono - dmono)[rows]
                a2 = max(a2, float(err.max()) * (L / 2.0))
    rep.a2_residual = a2
    rep.a2_pass = a2 <= max(tol * n, 1e-10)

    # A.3: SBP matrix identity
    res = pair.H @ pair.Dplus + (pair.H @ pair.Dminus).T - pair.B
    rep.a3_residual = float(np.max(np.abs(res)))
    rep.a3_pass = rep.a3_residual <= tol

    # A.4: dissipation sign, random vectors and exact extreme eigenvalue
    Sform = pair.H @ (pair.Dplus - pair.Dminus)
    Ssym = 0.5 * (Sform + Sform.T)
    rng = np.random.RandomState(seed)
    worst = -np.inf
    for _ in range(trials):
        f = rng.standard_normal(n)
        q = float(f @ (Ssym @ f)) / float(f @ (hseq * f))
        worst = max(worst, q)
    rep.a4_worst_form = worst
    rep.a4_eig_max = float(np.linalg.eigvalsh(Ssym).max())
    rep.a4_pass = worst <= 1e-12 and rep.a4_eig_max <= max(tol, 1e-12)
    return rep


# ---------------------------------------------------------------------------
# plain-text export / import
# ---------------------------------------------------------------------------

def _fmt(x):
    return "%.17g" % float(x)


def export_text(pair):
    """Serialize a pair to the plain-text interchange format (17 digits)."""
    out = io.StringIO()
    out.write("dpsbp-operator-pair v1\n")
    out.write("family %s\n" % pair.family)
    out.write("interior_order %d\n" % pair.interior_order)
    out.write("n_nodes %d\n" % pair.n_nodes)
    out.write("element_length %s\n" % _fmt(pair.element_length))
    out.write("certified_degree %d\n" % pair.certified_degree)
    out.write("quad_degree %d\n" % pair.quad_degree)
    out.write("interior_rows %d %d\n" % pair.interior_rows)
    out.write("nodes %s\n" % " ".join(_fmt(v) for v in pair.nodes))
    out.write("H %s\n" % " ".join(_fmt(v) for v in pair.hdiag))
    for name in ("Dplus", "Dminus"):
        M = getattr(pair, name)
        out.write("%s %d %d\n" % (name, M.shape[0], M.shape[1]))
        for row in M:
            out.write(" ".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def import_text(text):
    """Rebuild an OperatorPair from export_text output."""
    lines = text.strip().split("\n")
    if lines[0].strip() != "dpsbp-operator-pair v1":
        raise ValueError("not a dpsbp operator file")
    meta = {}
    i = 1
    mats = {}
    vecs = {}
    while i < len(lines):
        parts = lines[i].split()
        key = parts[0]
        if key in ("Dplus", "Dminus"):
            rows, cols = int(parts[1]), int(parts[2])
            M = np.array([[float(v) for v in lines[i + 1 + rr].split()]
                          for rr in range(rows)])
            assert M.shape == (rows, cols)
            mats[key] = M
            i += 1 + rows
        elif key in ("nodes", "H"):
            vecs[key] = np.array([float(v) for v in parts[1:]])
            i += 1
        else:
            meta[key] = parts[1:] if len(parts) > 2 else parts[1]
            i += 1
    n = int(meta["n_nodes"])
    B = np.zeros((n, n))
    B[0, 0] = -1.0
    B[-1, -1] = 1.0
    ir = tuple(int(v) for v in meta["interior_rows"])
    return OperatorPair(
        family=str(meta["family"]), interior_order=int(meta["interior_order"]),
        n_nodes=n, element_length=float(meta["element_length"]),
        nodes=vecs["nodes"], Dplus=mats["Dplus"], Dminus=mats["Dminus"],
        H=np.diag(vecs["H"]), B=B,
        certified_degree=int(meta["certified_degree"]),
        quad_degree=int(meta["quad_degree"]), interior_rows=ir)


def operator_hash(pair):
    """Stable content hash of a pair (sha256 of its text export)."""
    return hashlib.sha256(export_text(pair).encode()).hexdigest()
