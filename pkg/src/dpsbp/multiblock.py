"""Multi-block assembly of periodic penalized SBP operators.

A 1D mesh of K identical elements is coupled by weak interface penalties:

    Dtilde+- = blockdiag(D+-) + (1/2) H^{-1} (B_N + B_I)

where B_I couples interior interfaces and B_N the periodic wrap (the wrap is
the interface between element K and element 1, so both share one structure).
For the periodic assembly the global boundary matrix vanishes and the pair
satisfies <Dtilde+ f, g>_H + <f, Dtilde- g>_H = 0 exactly.

The companion matrices Btilde are the symmetric negative semi-definite jump
penalties with f^T Btilde f = -sum(jumps^2); equation modules use them for
interface upwinding of entropy variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MixedOperatorFamilies
from .operators import OperatorPair, split

__all__ = ["Mesh1D", "GlobalOperator", "assemble_periodic", "jump_vector"]


@dataclass(frozen=True)
class Mesh1D:
    """K identical elements tiling [origin, origin + length] with a shared
    operator pair."""
    pair: OperatorPair
    n_elements: int
    origin: float = 0.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("need at least one element")

    @property
    def length(self):
        return self.pair.element_length * self.n_elements

    @property
    def n_total(self):
        return self.pair.n_nodes * self.n_elements

    @property
    def coordinates(self):
        """Global node coordinates, element by element."""
        K = self.n_elements
        L_el = self.pair.element_length
        return np.concatenate([self.origin + self.pair.nodes + k * L_el
                               for k in range(K)])

    @property
    def node_spacing(self):
        """Per-node local spacing (half gap to each neighbor within element)."""
        gaps = np.diff(self.pair.nodes)
        s = np.empty(self.pair.n_nodes)
        s[0] = gaps[0]
        s[-1] = gaps[-1]
        if len(gaps) > 1:
            s[1:-1] = 0.5 * (gaps[:-1] + gaps[1:])
        return np.tile(s, self.n_elements)


@dataclass(frozen=True)
class GlobalOperator:
    """Penalized global operators on a periodic multi-block mesh.

    Dplus/Dminus include the interface and periodic penalties; D and Ds are
    the central/dissipation split (Ds is block diagonal, penalty free).
    hdiag is the diagonal of the global quadrature.  interfaces lists
    (a, b, k_left, k_right) with a the last node of element k_left and b the
    first node of element k_right; Btilde is the assembled squared-jump
    penalty pattern with u^T Btilde u = -sum(jumps^2).
    """
    mesh: Mesh1D
    Dplus: np.ndarray
    Dminus: np.ndarray
    D: np.ndarray
    Ds: np.ndarray
    hdiag: np.ndarray
    Btilde: np.ndarray
    interfaces: list = field(default_factory=list)

    @property
    def n_total(self):
        return self.mesh.n_total

    def h_inner(self, f, g):
        """Discrete inner product <f, g>_H on the global grid."""
        return float(f @ (self.hdiag * g))


def assemble_periodic(mesh):
    """Assemble the penalized periodic pair for a 1D multi-block mesh.

    All elements share the mesh's single OperatorPair, so mixed families
    cannot occur through this constructor; passing a sequence of differing
    pairs raises MixedOperatorFamilies.
    """
    if isinstance(mesh, (list, tuple)):
        fams = {(p.family, p.interior_order, p.n_nodes) for p in mesh}
        if len(fams) != 1:
            raise MixedOperatorFamilies(
                "elements must share one operator family/order, got %r"
                % (sorted(fams),))
        mesh = Mesh1D(pair=mesh[0], n_elements=len(mesh))
    pair = mesh.pair
    K, n = mesh.n_elements, pair.n_nodes
    N = K * n
    sp = split(pair)
    hdiag = np.tile(pair.hdiag, K)
    Dg = np.kron(np.eye(K), sp.D)
    Dsg = np.kron(np.eye(K), sp.Ds)

    # central interface penalty (B_I for interior interfaces, B_N the wrap)
    # and the squared-jump penalty pattern Btilde
    P = np.zeros((N, N))
    Bt = np.zeros((N, N))
    interfaces = []
    for k in range(K):
        a = k * n + n - 1
        b = ((k + 1) % K) * n
        P[a, a] -= 1.0
        P[a, b] += 1.0
        P[b, a] -= 1.0
        P[b, b] += 1.0
        Bt[a, a] -= 1.0
        Bt[a, b] += 1.0
        Bt[b, a] += 1.0
        Bt[b, b] -= 1.0
        interfaces.append((a, b, k, (k + 1) % K))

    Dt = Dg + 0.5 * (P / hdiag[:, None])
    Dtp = Dt + Dsg
    Dtm = Dt - Dsg
    return GlobalOperator(mesh=mesh, Dplus=Dtp, Dminus=Dtm, D=Dt, Ds=Dsg,
                          hdiag=hdiag, Btilde=Bt, interfaces=interfaces)


def jump_vector(u, gop):
    """Interface jumps [[u]] = u_first(k+1) - u_last(k), wrap included.

    Returns one jump per interface in the order of gop.interfaces (the last
    entry is the periodic wrap from element K to element 1).
    """
    u = np.asarray(u)
    out = np.empty(len(gop.interfaces))
    for i, (a, b, _, _) in enumerate(gop.interfaces):
        out[i] = u[b] - u[a]
    return out
