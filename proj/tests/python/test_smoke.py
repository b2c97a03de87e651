import numpy as np
import pytest

import pdhs


@pytest.fixture
def grid():
    return pdhs.Grid(0.0625, 256)


def test_parseval_and_inversion(grid):
    rng = np.random.default_rng(1)
    v = rng.standard_normal(grid.n_points)
    c = pdhs.dft(grid, v)
    dxi = 2 * np.pi / (grid.n_points * grid.h)
    assert np.isclose(np.sqrt(np.sum(np.abs(c) ** 2) * dxi), pdhs.l2_norm(grid, v), rtol=1e-12)
    assert np.allclose(pdhs.idft(grid, c).real, v, atol=1e-12)


def test_dft_matches_direct_sum():
    g = pdhs.Grid(0.25, 32, 0.3)
    v = np.random.default_rng(2).standard_normal(32)
    x, xi = g.positions(), g.frequencies()
    direct = g.h / np.sqrt(2 * np.pi) * np.exp(-1j * np.outer(xi, x)) @ v
    assert np.allclose(pdhs.dft(g, v), direct, atol=1e-12)


def test_central_difference_symbol(grid):
    x = grid.positions()
    xi = grid.frequencies()[140]
    d = pdhs.d_central(grid, np.cos(xi * x))
    assert np.allclose(d, -np.sin(xi * grid.h) / grid.h * np.sin(xi * x), atol=1e-12)


def test_localizations_and_bernstein(grid):
    v = np.random.default_rng(3).standard_normal(grid.n_points)
    j_min, j_max = pdhs.band_range(grid)
    total = sum(pdhs.localize(grid, v, j) for j in range(j_min, j_max + 1))
    assert np.linalg.norm(total) > 0
    r = pdhs.bernstein_check(grid, v, 2)
    assert r.lower_ok and r.upper_ok
    assert pdhs.besov_norm(grid, v, 1.0) > 0


def test_system_and_certificates():
    e = pdhs.euler_system()
    assert e.lam == 1.0
    assert np.allclose(pdhs.kalman_matrix(e), [[0, 0, 0, 1], [0, 1, 0, 0]])
    assert pdhs.kalman_rank_holds(e).holds
    assert pdhs.choose_corrector_constants(e).all_hold()
    bad = pdhs.validate_system(np.eye(2), np.diag([0.0, 1.0]), 1)
    with pytest.raises(pdhs.Error, match="KalmanFails"):
        pdhs.choose_corrector_constants(bad)
    with pytest.raises(pdhs.Error, match="NotDissipative"):
        pdhs.validate_system(np.array([[0.0, 1], [1, 0]]), np.zeros((2, 2)), 1)


def test_propagation_decays(grid):
    u0 = np.random.default_rng(4).standard_normal((2, grid.n_points))
    out = pdhs.spectral_propagate(pdhs.euler_system(), grid, u0, [0.0, 1.0, 10.0])
    norms = [np.linalg.norm(u) for u in out]
    assert out.shape == (3, 2, grid.n_points)
    assert norms[0] > norms[1] > norms[2]


def test_stability(grid):
    central = pdhs.stability_report("central", np.array([[1.0]]), np.zeros((1, 1)), grid, 1.0)
    assert central.stable
    plus = pdhs.stability_report("plus", np.array([[1.0]]), np.zeros((1, 1)), grid, 1.0)
    assert not plus.stable
    assert np.isclose(np.log(plus.max_amplification), 2 / grid.h)


def test_relaxation_value():
    r = pdhs.relaxation_errors(0.25, 0.0625)
    assert np.isclose(r.sup_error_linf, 8.892489220210614e-04, rtol=1e-7)
