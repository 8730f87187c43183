import numpy as np
import pytest

from fockcharge import divergence, modes, quadrature as quad


def naive_gram(shell, m, grid, weight):
    """Literal B diag(w g) B* assembly over the full 3d node set."""
    x, w = grid.nodes, grid.weights
    P = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    W3 = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    lam = np.sqrt(np.sum(P ** 2, axis=1) + m * m)
    if weight == "one":
        g = np.ones_like(lam)
    elif weight == "inv_lambda":
        g = 1.0 / lam
    else:
        g = P[:, weight[1] - 1] / lam
    B = np.stack([modes.mode_ft(k, P) for k in shell.modes])
    return np.real((B * (W3 * g)[None, :]) @ B.conj().T)


def test_build_grid_node_count():
    grid = quad.build_grid(8, 1, 8)
    assert grid.nodes_per_axis == 128
    assert grid.effective_nodes() == 128.0 ** 3


def test_build_grid_rejects_absurd_sizes():
    with pytest.raises(ValueError, match="rejected"):
        quad.build_grid(100, 2, 8)  # 3200^3 > 1e9


def test_build_grid_validation():
    for bad in [(0, 1, 4), (4, 0, 4), (4, 1, 1)]:
        with pytest.raises(ValueError):
            quad.build_grid(*bad)


def test_grid_nodes_symmetric_and_weights_positive():
    grid = quad.build_grid(5, 2, 4)
    assert np.all(grid.weights > 0)
    assert np.max(np.abs(grid.nodes + grid.nodes[::-1])) < 1e-15
    assert np.max(grid.nodes) < 5.0
    assert np.min(grid.nodes) > -5.0


def test_folded_assembly_matches_naive_reference():
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(5, 1, 4)
    suite = quad.gram_suite(shell, 1.0, grid)
    assert np.max(np.abs(suite.g0 - naive_gram(shell, 1.0, grid, "inv_lambda"))) < 1e-13
    for s in (1, 2, 3):
        ref = naive_gram(shell, 1.0, grid, ("p_over_lambda", s))
        assert np.max(np.abs(suite.gs[s - 1] - ref)) < 1e-13
    assert np.max(np.abs(suite.g_one - naive_gram(shell, 1.0, grid, "one"))) < 1e-13


def test_gram_weighted_single_entry_points():
    shell = modes.enumerate_shell(0)
    grid = quad.build_grid(6, 1, 4)
    g0 = quad.gram_weighted(shell, 1.0, grid, "inv_lambda")
    g2 = quad.gram_weighted(shell, 1.0, grid, ("p_over_lambda", 2))
    gone = quad.gram_weighted(shell, 1.0, grid, "one")
    assert g0.shape == (1, 1) and g0[0, 0] > 0
    assert abs(g2[0, 0]) < 1e-16  # odd weight kills the diagonal at k = 0
    assert abs(gone[0, 0] - 1.0) < grid.tail_estimate(0)
    with pytest.raises(ValueError):
        quad.gram_weighted(shell, 1.0, grid, "bogus")
    with pytest.raises(ValueError):
        quad.gram_weighted(shell, 1.0, grid, ("p_over_lambda", 4))


def test_plancherel_within_tail():
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(16, 1, 5)
    gone = quad.gram_weighted(shell, 1.0, grid, "one")
    assert np.max(np.abs(gone - np.eye(shell.count))) < grid.tail_estimate(1)


def test_gram_matrices_real_symmetric():
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(8, 1, 5)
    suite = quad.gram_suite(shell, 1.0, grid)
    for G in (suite.g0,) + suite.gs:
        assert np.isrealobj(G)
        assert np.max(np.abs(G - G.T)) < 1e-14


def test_negation_symmetry_of_gram_entries():
    # G0_{k,k'} = G0_{-k,-k'} and Gs_{k,k'} = -Gs_{-k,-k'}
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(8, 1, 5)
    suite = quad.gram_suite(shell, 1.0, grid)
    index = {tuple(m): i for i, m in enumerate(shell.modes)}
    neg = np.array([index[tuple(-m)] for m in shell.modes])
    assert np.max(np.abs(suite.g0 - suite.g0[np.ix_(neg, neg)])) < 1e-14
    for G in suite.gs:
        assert np.max(np.abs(G + G[np.ix_(neg, neg)])) < 1e-14


def test_heavy_mass_scaling():
    # G0 entries scale like 1/m for large m
    shell = modes.enumerate_shell(0)
    grid = quad.build_grid(10, 1, 5)
    a = quad.gram_suite(shell, 10.0, grid).g0[0, 0]
    b = quad.gram_suite(shell, 20.0, grid).g0[0, 0]
    assert a / b == pytest.approx(2.0, rel=0.02)


def test_order_refinement_self_convergence():
    shell = modes.enumerate_shell(1)
    ref = quad.gram_suite(shell, 1.0, quad.build_grid(8, 1, 8)).g0
    fine = quad.gram_suite(shell, 1.0, quad.build_grid(8, 1, 12)).g0
    assert abs(ref[0, 0] - fine[0, 0]) < 1e-6


def test_m_plus_properties():
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(12, 1, 6)
    suite = quad.gram_suite(shell, 1.0, grid)
    M = quad.m_plus(suite)
    tail = grid.tail_estimate(1)
    assert np.max(np.abs(M - M.conj().T)) < 1e-13
    eigs = np.linalg.eigvalsh(M)
    assert eigs.min() > -tail and eigs.max() < 1.0 + tail
    # product-basis trace: beta and alpha traces cancel over the spins
    assert abs(np.trace(M).real - 2.0 * shell.count) < 4 * shell.count * tail
    # C-invariant diagonal sits at 1/2
    V = divergence.c_invariant_transform(shell)
    diag = divergence.mplus_diagonal(suite, V)
    assert np.max(np.abs(diag - 0.5)) < tail


def test_scalar_spinor_trace_consistency():
    # sum over spins of the scalar reduction equals tr(M+) - tr(M+^2) with
    # the exact identity part
    shell = modes.enumerate_shell(1)
    grid = quad.build_grid(10, 1, 5)
    suite = quad.gram_suite(shell, 1.0, grid)
    M = quad.ideal_m_plus(suite)
    trace_route = float(np.trace(M).real - np.vdot(M, M).real)
    scalar = shell.count - np.sum(suite.g0 ** 2) - sum(np.sum(G ** 2) for G in suite.gs)
    assert trace_route == pytest.approx(float(scalar), rel=1e-8)


def test_inverse_energy_gram_entry_position_space_crosscheck():
    # <phi_0, phi_0 / lambda> two ways: momentum-space quadrature against the
    # position-space Bessel kernel folded with the cube's autocorrelation
    # volume prod_s (2 pi - |r_s|); the routes share no code path
    from fockcharge import bessel
    m = 1.0
    grid = quad.build_grid(24, 2, 6)
    momentum = quad.gram_suite(modes.enumerate_shell(0), m, grid).g0[0, 0]
    n = 60
    xi, wi = np.polynomial.legendre.leggauss(n)
    t = np.pi * (xi + 1.0)
    wt = np.pi * wi
    X, Y, Z = np.meshgrid(t, t, t, indexing="ij")
    R = np.sqrt(X ** 2 + Y ** 2 + Z ** 2)
    kernel = bessel.k1(m * R.ravel()).reshape(R.shape) / R
    overlap = (2 * np.pi - X) * (2 * np.pi - Y) * (2 * np.pi - Z)
    W3 = wt[:, None, None] * wt[None, :, None] * wt[None, None, :]
    position = (8.0 * m * np.sqrt(2 / np.pi) * np.sum(W3 * kernel * overlap)
                / (2 * np.pi) ** 4.5)
    assert abs(momentum - position) / momentum < 2e-4


def test_gram_suite_validation():
    shell = modes.enumerate_shell(2)
    with pytest.raises(ValueError, match="cutoff"):
        quad.gram_suite(shell, 1.0, quad.build_grid(2, 1, 4))
    with pytest.raises(ValueError, match="non-negative"):
        quad.gram_suite(shell, -1.0, quad.build_grid(6, 1, 4))


def test_tail_estimate_monotone():
    grid = quad.build_grid(20, 1, 4)
    assert grid.tail_estimate(0) < grid.tail_estimate(4)
    with pytest.raises(ValueError):
        grid.tail_estimate(20)
