import numpy as np
import pytest
from scipy import sparse

from fockcharge import fock
from fockcharge.charge import max_abs


def anti(A, B):
    return A @ B + B @ A


def test_vacuum_is_normalized_and_annihilated(model6, rng):
    omega = fock.vacuum(model6)
    assert np.linalg.norm(omega) == 1.0
    for _ in range(5):
        f = rng.normal(size=6) + 1j * rng.normal(size=6)
        assert np.linalg.norm(fock.annihilator_b(model6, f) @ omega) == 0.0
        assert np.linalg.norm(fock.annihilator_c(model6, f) @ omega) == 0.0


def test_car_relations(model6, rng):
    I = sparse.identity(model6.fock_dim, format="csr")
    Pp, Pm = model6.p_plus, model6.p_minus
    for _ in range(20):
        f = rng.normal(size=6) + 1j * rng.normal(size=6)
        g = rng.normal(size=6) + 1j * rng.normal(size=6)
        b_f = fock.annihilator_b(model6, f)
        bs_f = fock.creator_b(model6, f)
        b_g = fock.annihilator_b(model6, g)
        c_f = fock.annihilator_c(model6, f)
        cs_f = fock.creator_c(model6, f)
        c_g = fock.annihilator_c(model6, g)
        cs_g = fock.creator_c(model6, g)
        assert max_abs(anti(b_f, b_g)) < 1e-12
        assert max_abs(anti(bs_f, b_g) - np.vdot(g, Pp @ f) * I) < 1e-12
        assert max_abs(anti(cs_f, c_g) - np.conj(np.vdot(g, Pm @ f)) * I) < 1e-12
        assert max_abs(anti(b_f, c_g)) < 1e-12
        assert max_abs(anti(b_f, cs_g)) < 1e-12
        assert max_abs(anti(bs_f, cs_g)) < 1e-12


def test_field_operator_car(model6, rng):
    I = sparse.identity(model6.fock_dim, format="csr")
    for _ in range(10):
        f = rng.normal(size=6) + 1j * rng.normal(size=6)
        g = rng.normal(size=6) + 1j * rng.normal(size=6)
        psi_f = fock.field_op(model6, f)
        psi_g = fock.field_op(model6, g)
        psis_f = fock.field_adjoint(model6, f)
        assert max_abs(anti(psis_f, psi_g) - np.vdot(g, f) * I) < 1e-12
        assert max_abs(anti(psi_f, psi_g)) < 1e-12
        assert max_abs(psi_f @ psi_f) < 1e-12
        assert max_abs(psis_f - psi_f.conj().T.tocsr()) == 0.0


def test_antilinearity_of_b(model6, rng):
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    g = rng.normal(size=6) + 1j * rng.normal(size=6)
    alpha = 0.7 - 1.9j
    lhs = fock.annihilator_b(model6, alpha * f + g)
    rhs = np.conj(alpha) * fock.annihilator_b(model6, f) + fock.annihilator_b(model6, g)
    assert max_abs(lhs - rhs) < 1e-12


def test_linearity_of_creator_b_and_antilinearity_of_creator_c(model6, rng):
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    g = rng.normal(size=6) + 1j * rng.normal(size=6)
    alpha = -1.2 + 0.4j
    lhs = fock.creator_b(model6, alpha * f + g)
    rhs = alpha * fock.creator_b(model6, f) + fock.creator_b(model6, g)
    assert max_abs(lhs - rhs) < 1e-12
    lhs = fock.creator_c(model6, alpha * f + g)
    rhs = np.conj(alpha) * fock.creator_c(model6, f) + fock.creator_c(model6, g)
    assert max_abs(lhs - rhs) < 1e-12


def test_sector_grading(model6, rng):
    n_p, n_a = fock.sector_labels(model6)
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    bs = fock.creator_b(model6, f).tocoo()
    # b* raises the particle count by one and leaves antiparticles alone
    assert np.all(n_p[bs.row] == n_p[bs.col] + 1)
    assert np.all(n_a[bs.row] == n_a[bs.col])
    cs = fock.creator_c(model6, f).tocoo()
    assert np.all(n_a[cs.row] == n_a[cs.col] + 1)
    assert np.all(n_p[cs.row] == n_p[cs.col])


def test_normal_ordered_density(model6, rng):
    omega = fock.vacuum(model6)
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    f /= np.linalg.norm(f)
    T = fock.normal_ordered_density(model6, f)
    assert abs(np.vdot(omega, T @ omega)) < 1e-14
    assert max_abs(T - T.conj().T) < 1e-13
    mu_p = np.linalg.norm(model6.p_plus @ f) ** 2
    mu_m = np.linalg.norm(model6.p_minus @ f) ** 2
    eigs = np.unique(np.round(np.linalg.eigvalsh(T.toarray()), 9))
    assert np.allclose(np.sort(eigs), np.sort([-mu_m, mu_p]), atol=1e-8)
    # Psi*(f) Psi(f) is a projection for a unit vector
    P = fock.field_adjoint(model6, f) @ fock.field_op(model6, f)
    assert max_abs(P @ P - P) < 1e-12


def test_normal_ordered_density_requires_unit_norm(model6):
    with pytest.raises(ValueError, match="normalized"):
        fock.normal_ordered_density(model6, np.ones(6))


def test_densities_commute_over_onb(model6, rng):
    frame, _ = np.linalg.qr(rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3)))
    Ts = [fock.normal_ordered_density(model6, frame[:, j]) for j in range(3)]
    for i in range(3):
        for j in range(3):
            assert max_abs(Ts[i] @ Ts[j] - Ts[j] @ Ts[i]) < 1e-11


def test_model_validation_rejects_bad_projector(rng):
    model = fock.random_model(4, rng)
    with pytest.raises(ValueError, match="projector"):
        fock.ToyModel(n=4, p_plus=np.eye(4) * 0.5, conj=model.conj,
                      basis_plus=model.basis_plus, basis_antip=model.basis_antip)


def test_model_requires_even_mode_count(rng):
    with pytest.raises(ValueError):
        fock.random_model(5, rng)


def test_dimension_mismatch_rejected(model6):
    with pytest.raises(ValueError):
        fock.creator_b(model6, np.ones(4))
