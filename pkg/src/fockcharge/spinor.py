"""Dirac gamma algebra, the relativistic energy function, momentum-space
spectral projectors and the charge-conjugation matrix.

Conventions: standard Dirac representation with beta = diag(1, 1, -1, -1),
inner products conjugate-linear in the first argument, natural units
(hbar = c = 1).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "GammaSet",
    "gamma_matrices",
    "energy",
    "spectral_projector",
    "conjugation_matrix",
]


@dataclass(frozen=True)
class GammaSet:
    """The four gamma matrices plus the derived alpha_a = gamma0 gamma_a and
    beta = gamma0 of the free Dirac Hamiltonian."""

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    alpha: tuple  # (alpha1, alpha2, alpha3)
    beta: np.ndarray

    @property
    def gammas(self):
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)


@lru_cache(maxsize=1)
def gamma_matrices() -> GammaSet:
    """Standard Dirac representation of the gamma matrices.

    Satisfies {gamma^a, gamma^b} = 2 eta^{ab} I with eta = diag(1,-1,-1,-1);
    beta and every alpha_a are Hermitian, and i*gamma2 is a real matrix.
    """
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    zero = np.zeros((2, 2), dtype=complex)
    eye = np.eye(2, dtype=complex)

    gamma0 = np.block([[eye, zero], [zero, -eye]])
    gamma1 = np.block([[zero, s1], [-s1, zero]])
    gamma2 = np.block([[zero, s2], [-s2, zero]])
    gamma3 = np.block([[zero, s3], [-s3, zero]])
    alpha = tuple(gamma0 @ g for g in (gamma1, gamma2, gamma3))
    for m in alpha + (gamma0,):
        m.setflags(write=False)
    return GammaSet(gamma0, gamma1, gamma2, gamma3, alpha, gamma0)


def energy(p, m: float) -> float:
    """Energy lambda(p) = sqrt(|p|^2 + m^2) of momentum p at mass m >= 0."""
    if m < 0:
        raise ValueError(f"mass must be non-negative, got {m}")
    p = np.asarray(p, dtype=float)
    return float(np.sqrt(np.dot(p, p) + m * m))


def spectral_projector(p, m: float, sign: int) -> np.ndarray:
    """Momentum-space projector onto the positive/negative energy subspace,

        Lambda^{+-}(p) = 1/2 +- (m beta + alpha . p) / (2 lambda(p)).

    `sign` is +1 or -1.  Undefined at the singular point m = 0, p = 0.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    lam = energy(p, m)
    if lam == 0.0:
        raise ValueError("spectral projector undefined at m = 0, p = 0 (lambda = 0)")
    g = gamma_matrices()
    p = np.asarray(p, dtype=float)
    h = m * g.beta + sum(p[a] * g.alpha[a] for a in range(3))
    return 0.5 * np.eye(4, dtype=complex) + sign * h / (2.0 * lam)


@lru_cache(maxsize=1)
def conjugation_matrix() -> np.ndarray:
    """Matrix i*gamma2 of the charge conjugation C f = i gamma2 conj(f).

    The result has real entries and squares to the identity, so C is an
    anti-unitary involution.
    """
    g = gamma_matrices()
    c = 1j * g.gamma2
    c = np.real_if_close(c, tol=1)
    assert np.isrealobj(c)
    c.setflags(write=False)
    return c
