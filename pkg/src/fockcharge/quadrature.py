"""Momentum-space quadrature and weighted Gram-matrix assembly.

The integrals behind the region-charge series are 3d integrals of

    conj(phi_k^(p)) phi_k'^(p) g(p),    g in {1, 1/lambda, p_s/lambda},

over the cube modes of a shell.  The mode transforms factor per axis and the
grid is a tensor product of identical 1d panels, so a Gram matrix is a
three-stage contraction of per-axis factor tables against the non-separable
weight g(p).  Two structural savings make the big shells cheap:

* per axis the two modes enter through the symmetric product
  D(a - p) D(a' - p), so only pairs a <= a' are contracted;
* the node set is symmetric under p -> -p and every weight is even or odd
  in each coordinate, so each axis is folded onto its positive nodes.

Panels are aligned to the integers because the integrand oscillates with
unit period in each k_s - p_s; Gauss-Legendre of moderate order per panel
then converges fast.  Accumulation order is fixed by the node ordering, so
results are reproducible run to run.
"""

from dataclasses import dataclass, field

import numpy as np

from .modes import Shell, axis_factor
from .spinor import gamma_matrices

__all__ = [
    "QuadGrid",
    "build_grid",
    "GramMatrices",
    "gram_suite",
    "gram_weighted",
    "m_plus",
    "ideal_m_plus",
]

MAX_EFFECTIVE_NODES = 1e9


@dataclass(frozen=True)
class QuadGrid:
    """Tensor-product Gauss-Legendre grid on [-cutoff, cutoff]^3 with panel
    boundaries at multiples of 1/panels_per_unit."""

    cutoff: int
    panels_per_unit: int
    gauss_order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def nodes_per_axis(self) -> int:
        return self.nodes.size

    def effective_nodes(self) -> float:
        return float(self.nodes.size) ** 3

    def tail_estimate(self, kmax: int = 0) -> float:
        """Estimated relative mass lost outside the cutoff for modes with
        |k|_inf <= kmax, from the 1d envelope 4 sin^2(pi q)/q^2 whose tail
        integrates to ~4/Q per axis against a total of 4 pi^2."""
        Q = self.cutoff - kmax
        if Q <= 0:
            raise ValueError(f"cutoff {self.cutoff} does not cover shell {kmax}")
        per_axis = 1.0 / (np.pi ** 2 * Q)
        return float(1.0 - (1.0 - per_axis) ** 3)

    def describe(self) -> str:
        return (f"cutoff={self.cutoff} panels_per_unit={self.panels_per_unit} "
                f"gauss_order={self.gauss_order}")


def build_grid(cutoff: int, panels_per_unit: int = 2, gauss_order: int = 6) -> QuadGrid:
    """Panelized Gauss-Legendre grid; per axis 2*cutoff*panels_per_unit
    panels of `gauss_order` nodes each."""
    if cutoff < 1 or int(cutoff) != cutoff:
        raise ValueError("cutoff must be a positive integer")
    if panels_per_unit < 1 or int(panels_per_unit) != panels_per_unit:
        raise ValueError("panels_per_unit must be a positive integer")
    if gauss_order < 2:
        raise ValueError("gauss_order must be >= 2")
    per_axis = 2 * cutoff * panels_per_unit * gauss_order
    if float(per_axis) ** 3 > MAX_EFFECTIVE_NODES:
        raise ValueError(f"grid of {per_axis}^3 effective nodes rejected")
    xi, wi = np.polynomial.legendre.leggauss(int(gauss_order))
    width = 1.0 / panels_per_unit
    starts = np.arange(-cutoff * panels_per_unit, cutoff * panels_per_unit) * width
    nodes = (starts[:, None] + 0.5 * width * (xi[None, :] + 1.0)).ravel()
    weights = np.broadcast_to(0.5 * width * wi, (starts.size, gauss_order)).ravel().copy()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadGrid(int(cutoff), int(panels_per_unit), int(gauss_order), nodes, weights)


# ---------------------------------------------------------------------------
# folded per-axis factor tables


def _pair_index(M: int):
    """Index matrix PI[a, a'] into the list of unordered pairs a <= a'."""
    PI = np.empty((M, M), dtype=int)
    pairs = []
    for a in range(M):
        for b in range(a, M):
            PI[a, b] = PI[b, a] = len(pairs)
            pairs.append((a, b))
    return PI, np.array(pairs)


def _axis_tables(K: int, grid: QuadGrid):
    """Even/odd folded pair tables over the positive half-axis.

    Returns (E, Ox, xp) where for the pair r = (a, a')
      E[r, i]  = B(a, x_i) B(a', x_i) + B(a, -x_i) B(a', -x_i)
      Ox[r, i] = x_i * (B(a, x_i) B(a', x_i) - B(a, -x_i) B(a', -x_i))
    with B(a, x) = sqrt(w) D(a - x) / (2 pi).
    """
    N = grid.nodes_per_axis
    xp = grid.nodes[N // 2:]
    wp = grid.weights[N // 2:]
    offsets = np.arange(-K, K + 1, dtype=float)
    sq = np.sqrt(wp)
    Bp = sq[None, :] * axis_factor(offsets[:, None] - xp[None, :]) / (2 * np.pi)
    Bm = sq[None, :] * axis_factor(offsets[:, None] + xp[None, :]) / (2 * np.pi)
    M = offsets.size
    PI, pairs = _pair_index(M)
    a, b = pairs[:, 0], pairs[:, 1]
    prod_p = Bp[a] * Bp[b]
    prod_m = Bm[a] * Bm[b]
    E = prod_p + prod_m
    Ox = xp[None, :] * (prod_p - prod_m)
    return E, Ox, xp, PI


def _full_axis_table(K: int, grid: QuadGrid):
    offsets = np.arange(-K, K + 1, dtype=float)
    return (np.sqrt(grid.weights)[None, :]
            * axis_factor(offsets[:, None] - grid.nodes[None, :]) / (2 * np.pi))


def _shell_permutation(shell: Shell):
    """Positions of the canonically ordered shell modes inside the plain
    product enumeration over (k1, k2, k3)."""
    K, M = shell.K, 2 * shell.K + 1
    a = shell.modes + K
    return (a[:, 0] * M + a[:, 1]) * M + a[:, 2]


def _unfold(acc: np.ndarray, PI: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Pair-compressed (npair, npair, npair) accumulator -> (M^3, M^3) Gram
    in canonical shell order."""
    M = PI.shape[0]
    I1 = PI[:, None, None, :, None, None]
    I2 = PI[None, :, None, None, :, None]
    I3 = PI[None, None, :, None, None, :]
    G = acc[I1, I2, I3].reshape(M ** 3, M ** 3)
    return np.ascontiguousarray(G[np.ix_(perm, perm)])


@dataclass
class GramMatrices:
    """Weighted Gram matrices of a shell's modes: G_one (weight 1), G0
    (weight 1/lambda) and G1..G3 (weights p_s/lambda), all real symmetric
    in canonical shell order, plus grid metadata."""

    shell: Shell
    m: float
    grid: QuadGrid
    g_one: np.ndarray
    g0: np.ndarray
    gs: tuple  # (G1, G2, G3)

    def tail_estimate(self) -> float:
        return self.grid.tail_estimate(self.shell.K)


def gram_suite(shell: Shell, m: float, grid: QuadGrid) -> GramMatrices:
    """Assemble all weighted Gram matrices of a shell in one quadrature pass."""
    if m < 0:
        raise ValueError("mass must be non-negative")
    if grid.cutoff <= shell.K:
        raise ValueError("cutoff must exceed the shell radius")
    E, Ox, xp, PI = _axis_tables(shell.K, grid)
    npair = E.shape[0]
    Nh = xp.size
    R = np.vstack([E, Ox])

    Yee = np.empty((Nh, npair, npair))
    Yoe = np.empty((Nh, npair, npair))
    Yeo = np.empty((Nh, npair, npair))
    x2 = xp ** 2
    plane = x2[:, None] + x2[None, :] + m * m
    for i3 in range(Nh):
        W = 1.0 / np.sqrt(plane + x2[i3])
        Y = (R @ W) @ R.T
        Yee[i3] = Y[:npair, :npair]
        Yoe[i3] = Y[npair:, :npair]
        Yeo[i3] = Y[:npair, npair:]

    acc0 = np.tensordot(Yee, E, axes=([0], [1]))
    acc3 = np.tensordot(Yee, Ox, axes=([0], [1]))
    acc1 = np.tensordot(Yoe, E, axes=([0], [1]))
    acc2 = np.tensordot(Yeo, E, axes=([0], [1]))

    perm = _shell_permutation(shell)
    B = _full_axis_table(shell.K, grid)
    g1d = B @ B.T
    g_one = np.kron(np.kron(g1d, g1d), g1d)[np.ix_(perm, perm)]

    return GramMatrices(
        shell=shell, m=float(m), grid=grid,
        g_one=np.ascontiguousarray(g_one),
        g0=_unfold(acc0, PI, perm),
        gs=tuple(_unfold(a, PI, perm) for a in (acc1, acc2, acc3)),
    )


def gram_weighted(shell: Shell, m: float, grid: QuadGrid, weight) -> np.ndarray:
    """Single weighted Gram matrix; weight is "one", "inv_lambda" or
    ("p_over_lambda", s) with axis s in {1, 2, 3}.

    Conceptually B diag(w g) B* with B the matrix of mode values at the
    nodes; realized through the shared folded assembly.
    """
    if weight == "one":
        perm = _shell_permutation(shell)
        B = _full_axis_table(shell.K, grid)
        g1d = B @ B.T
        return np.kron(np.kron(g1d, g1d), g1d)[np.ix_(perm, perm)]
    suite = gram_suite(shell, m, grid)
    if weight == "inv_lambda":
        return suite.g0
    if isinstance(weight, tuple) and len(weight) == 2 and weight[0] == "p_over_lambda":
        s = weight[1]
        if s not in (1, 2, 3):
            raise ValueError("axis must be 1, 2 or 3")
        return suite.gs[s - 1]
    raise ValueError(f"unknown weight {weight!r}")


def _spin_blocks():
    g = gamma_matrices()
    return g.beta, g.alpha


def m_plus(suite: GramMatrices) -> np.ndarray:
    """Spinor-level Gram of the positive spectral projector,
    M+_{(i,s),(j,t)} = <f_i^s, Lambda+ f_j^t>, spin as the fast index.

    Uses the quadrature value of the weight-one Gram for the identity part,
    so eigenvalues sit in [0, 1] up to the quadrature tolerance.
    """
    beta, alpha = _spin_blocks()
    out = 0.5 * np.kron(suite.g_one, np.eye(4, dtype=complex))
    out += 0.5 * suite.m * np.kron(suite.g0, beta)
    for s in range(3):
        out += 0.5 * np.kron(suite.gs[s], alpha[s])
    return out


def ideal_m_plus(suite: GramMatrices) -> np.ndarray:
    """Same as m_plus but with the identity part taken exactly, invoking the
    exact orthonormality of the modes; this is the form whose traces match
    the scalar-reduced series identically."""
    beta, alpha = _spin_blocks()
    J4 = 4 * suite.shell.count
    out = 0.5 * np.eye(J4, dtype=complex)
    out += 0.5 * suite.m * np.kron(suite.g0, beta)
    for s in range(3):
        out += 0.5 * np.kron(suite.gs[s], alpha[s])
    return out
