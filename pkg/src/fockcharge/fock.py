"""Exact finite-mode fermionic Fock space over a toy one-particle space.

The one-particle space is C^n with an orthogonal projector P+ (the analog of
the positive spectral subspace) and an anti-unitary involution C exchanging
ran(P+) and ran(P-).  The Fock space is the fermionic Fock space over
ran(P+) (+) C ran(P-), realized concretely on C^(2^n) with occupation-number
basis states: particle modes occupy the leading positions of the mode list,
antiparticle modes follow.  With that ordering the Jordan-Wigner sign string
of an antiparticle creator crosses the whole particle block, which is exactly
the (-1)^n factor in the antiparticle creation operator.

All operators are returned as scipy CSR matrices; they stay cheap to combine
for the mode counts (n <= 12) this module is meant for.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

from .involution import AntiUnitary

__all__ = [
    "ToyModel",
    "random_model",
    "vacuum",
    "creator_b",
    "annihilator_b",
    "creator_c",
    "annihilator_c",
    "field_op",
    "field_adjoint",
    "normal_ordered_density",
    "sector_labels",
    "sector_mask",
]

MODEL_TOL = 1e-12


@lru_cache(maxsize=32)
def _jw_creators(nmodes: int):
    """Jordan-Wigner creation operators for `nmodes` modes.

    Mode 0 is the leftmost Kronecker factor; the Z string sits on the modes
    *before* the target mode, so creating in mode k picks up the parity of
    the occupation of modes 0..k-1.
    """
    z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
    up = sparse.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))  # |1><0|
    eye = sparse.identity(2, format="csr")
    ops = []
    for k in range(nmodes):
        factors = [z] * k + [up] + [eye] * (nmodes - k - 1)
        op = factors[0]
        for f in factors[1:]:
            op = sparse.kron(op, f, format="csr")
        op.eliminate_zeros()
        ops.append(op.astype(complex))
    return tuple(ops)


@dataclass
class ToyModel:
    """Finite-dimensional stand-in for the split one-particle space.

    Fields
    ------
    n : total one-particle modes
    p_plus : n x n orthogonal projector onto the "positive" subspace
    conj : anti-unitary involution C with C P- C = P+
    basis_plus : ONB of ran(P+), the particle modes (columns)
    basis_antip : ONB of ran(C P-), the antiparticle modes (columns)
    """

    n: int
    p_plus: np.ndarray
    conj: AntiUnitary
    basis_plus: np.ndarray
    basis_antip: np.ndarray
    basis_minus: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        P = self.p_plus
        if np.max(np.abs(P @ P - P)) > 1e-10 or np.max(np.abs(P - P.conj().T)) > 1e-10:
            raise ValueError("p_plus is not an orthogonal projector")
        Pm = self.p_minus
        # C P- C = P+ as anti-linear conjugation: U conj(P-) conj(U) = P+
        U = self.conj.U
        dev = np.max(np.abs(U @ np.conj(Pm) @ np.conj(U) - P))
        if dev > 1e-10:
            raise ValueError(f"C does not exchange the subspaces (dev {dev:.2e})")
        self.d_plus = self.basis_plus.shape[1]
        self.d_minus = self.basis_antip.shape[1]
        if self.d_plus + self.d_minus != self.n:
            raise ValueError("mode count mismatch")
        self.fock_dim = 2 ** self.n

    @property
    def p_minus(self) -> np.ndarray:
        return np.eye(self.n) - self.p_plus


def random_model(n: int, rng) -> ToyModel:
    """Random toy model with dim ran(P+) = dim ran(P-) = n/2.

    P+ and C are generated together: a Haar-ish unitary V = [V+ V-] fixes the
    two subspaces and a random real orthogonal O pairs them, C(V- x) =
    V+ O conj(x).  This guarantees C P- C = P+ by construction.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError("n must be even and >= 2")
    d = n // 2
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    V, R = np.linalg.qr(A)
    V = V * (np.diagonal(R) / np.abs(np.diagonal(R)))  # fix phases
    Vp, Vm = V[:, :d], V[:, d:]
    O, r = np.linalg.qr(rng.normal(size=(d, d)))
    O = O * np.sign(np.diagonal(r))
    U = Vm @ O.T @ Vp.T + Vp @ O @ Vm.T
    return ToyModel(
        n=n,
        p_plus=Vp @ Vp.conj().T,
        conj=AntiUnitary(U),
        basis_plus=Vp,
        basis_antip=Vp @ O,
        basis_minus=Vm,
    )


def vacuum(model: ToyModel) -> np.ndarray:
    """The vacuum vector: amplitude 1 on the empty occupation string."""
    v = np.zeros(model.fock_dim, dtype=complex)
    v[0] = 1.0
    return v


def _check_f(model: ToyModel, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (model.n,):
        raise ValueError(f"one-particle vector must have shape ({model.n},)")
    return f


def creator_b(model: ToyModel, f) -> sparse.csr_matrix:
    """Particle creation operator b*(f); creates P+ f, linear in f."""
    f = _check_f(model, f)
    ops = _jw_creators(model.n)
    coeffs = model.basis_plus.conj().T @ f  # <u_a, f>
    out = sparse.csr_matrix((model.fock_dim, model.fock_dim), dtype=complex)
    for a in range(model.d_plus):
        out = out + coeffs[a] * ops[a]
    return out


def annihilator_b(model: ToyModel, f) -> sparse.csr_matrix:
    """Particle annihilation operator b(f) = (b*(f))^dagger; anti-linear in f."""
    return creator_b(model, f).conj().T.tocsr()


def creator_c(model: ToyModel, f) -> sparse.csr_matrix:
    """Antiparticle creation operator c*(f); creates C P- f in the
    antiparticle modes, with the parity factor over the particle block
    supplied by the Jordan-Wigner string."""
    f = _check_f(model, f)
    ops = _jw_creators(model.n)
    target = model.conj.apply(model.p_minus @ f)
    coeffs = model.basis_antip.conj().T @ target
    out = sparse.csr_matrix((model.fock_dim, model.fock_dim), dtype=complex)
    for b in range(model.d_minus):
        out = out + coeffs[b] * ops[model.d_plus + b]
    return out


def annihilator_c(model: ToyModel, f) -> sparse.csr_matrix:
    """Antiparticle annihilation operator c(f) = (c*(f))^dagger; linear in f."""
    return creator_c(model, f).conj().T.tocsr()


def field_op(model: ToyModel, f) -> sparse.csr_matrix:
    """Field operator Psi(f) = b(f) + c*(f)."""
    return (annihilator_b(model, f) + creator_c(model, f)).tocsr()


def field_adjoint(model: ToyModel, f) -> sparse.csr_matrix:
    """Psi*(f) = b*(f) + c(f), the matrix adjoint of Psi(f)."""
    return (creator_b(model, f) + annihilator_c(model, f)).tocsr()


def normal_ordered_density(model: ToyModel, f) -> sparse.csr_matrix:
    """Wick-ordered density :Psi*(f) Psi(f): = Psi*(f) Psi(f) - |P- f|^2
    for a normalized one-particle vector f."""
    f = _check_f(model, f)
    nrm = np.linalg.norm(f)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"f must be normalized, |f| = {nrm}")
    psi = field_op(model, f)
    shift = float(np.linalg.norm(model.p_minus @ f) ** 2)
    return (psi.conj().T @ psi - shift * sparse.identity(model.fock_dim, format="csr")).tocsr()


def sector_labels(model: ToyModel):
    """(n, m) occupation labels of every Fock basis state.

    Returns two integer arrays: particle count and antiparticle count per
    basis index.  Mode k occupies bit (n_modes - 1 - k) of the index.
    """
    idx = np.arange(model.fock_dim, dtype=np.int64)
    n_p = np.zeros(model.fock_dim, dtype=np.int64)
    n_a = np.zeros(model.fock_dim, dtype=np.int64)
    for k in range(model.n):
        bit = (idx >> (model.n - 1 - k)) & 1
        if k < model.d_plus:
            n_p += bit
        else:
            n_a += bit
    return n_p, n_a


def sector_mask(model: ToyModel, n: int, m: int) -> np.ndarray:
    """Boolean mask of the (n, m) particle/antiparticle sector."""
    n_p, n_a = sector_labels(model)
    return (n_p == n) & (n_a == m)
