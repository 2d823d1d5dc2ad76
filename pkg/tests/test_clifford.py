import numpy as np
import pytest

from diracsep import clifford as cl
from diracsep.errors import CliffordError, DomainError, SingularFrameError
from diracsep.geometry import PolarChart, all_charts

ETA_INV = np.linalg.inv(cl.ETA)


@pytest.mark.parametrize("s", [1, -1])
def test_anticommutators_close_algebra(s):
    rep = cl.make_gamma_rep(s)
    assert cl.clifford_residual(rep.gammas, ETA_INV) <= 1e-14
    for a in range(3):
        assert abs(np.trace(rep.gammas[a])) <= 1e-14


def test_g1_matches_stated_form():
    rep = cl.make_gamma_rep(1)
    assert np.allclose(rep.g1, np.array([[0, 1j], [1j, 0]]))
    assert np.allclose(rep.g0 @ rep.g0, np.eye(2))


def test_g1_g2_anticommute_for_minus_sign():
    rep = cl.make_gamma_rep(-1)
    assert np.max(np.abs(cl.anticommutator(rep.g1, rep.g2))) <= 1e-14


def test_invalid_sign_rejected():
    with pytest.raises(DomainError):
        cl.make_gamma_rep(2)


@pytest.mark.parametrize("s", [1, -1])
def test_frame_commutator_identity(s):
    rep = cl.make_gamma_rep(s)
    eps_up = cl.raise_levi_civita(cl.EPS3, ETA_INV)
    glow = np.einsum("ab,bij->aij", cl.ETA, rep.gammas)
    for a in range(3):
        for b in range(3):
            lhs = cl.commutator(rep.gammas[a], rep.gammas[b])
            rhs = -2j * s * np.einsum("c,cij->ij", eps_up[a, b], glow)
            assert np.max(np.abs(lhs - rhs)) <= 1e-14


@pytest.mark.parametrize("s", [1, -1])
def test_curved_commutator_identity_on_every_chart(s, rng):
    rep = cl.make_gamma_rep(s)
    for chart in all_charts(a=0.7):
        for _ in range(20):
            u = np.array([rng.uniform(lo, hi) for lo, hi in chart.sample_box])
            gammas = cl.curved_gamma(rep, chart, u)
            ginv = chart.metric_inv(u)
            assert cl.clifford_residual(gammas, ginv) <= 1e-12
            glow = np.einsum("ab,bij->aij", chart.metric(u), gammas)
            e_up = cl.raise_levi_civita(cl.levi_civita_tensor(chart, u), ginv)
            for mu in range(3):
                for nu in range(3):
                    lhs = cl.commutator(gammas[mu], gammas[nu])
                    rhs = -2j * s * np.einsum("c,cij->ij", e_up[mu, nu], glow)
                    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_curved_gamma_polar_value():
    rep = cl.make_gamma_rep(1)
    gammas = cl.curved_gamma(rep, PolarChart(), np.array([0.0, 2.0, 0.3]))
    assert np.allclose(gammas[0], rep.g0)
    assert np.allclose(gammas[1], rep.g1)
    assert np.allclose(gammas[2], rep.g2 / 2.0)


def test_curved_gamma_domain_error():
    rep = cl.make_gamma_rep(1)
    with pytest.raises(DomainError):
        cl.curved_gamma(rep, PolarChart(), np.array([0.0, -1.0, 0.0]))


def test_expand_in_basis_trivial_cases():
    rep = cl.make_gamma_rep(1)
    c, c_mu = cl.expand_in_basis(cl.ID2, rep.gammas)
    assert abs(c - 1.0) <= 1e-14 and np.max(np.abs(c_mu)) <= 1e-14
    c, c_mu = cl.expand_in_basis(rep.g0, rep.gammas)
    assert abs(c) <= 1e-14
    assert np.max(np.abs(c_mu - np.array([1.0, 0.0, 0.0]))) <= 1e-14


def test_expand_roundtrip_random_matrices(rng):
    rep = cl.make_gamma_rep(-1)
    for _ in range(1000):
        mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        c, c_mu = cl.expand_in_basis(mat, rep.gammas)
        recon = cl.reconstruct_from_basis(c, c_mu, rep.gammas)
        assert np.max(np.abs(recon - mat)) <= 1e-13


def test_expand_roundtrip_curved(rng):
    rep = cl.make_gamma_rep(1)
    chart = PolarChart()
    u = np.array([0.1, 1.3, 0.7])
    gammas = cl.curved_gamma(rep, chart, u)
    mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    c, c_mu = cl.expand_in_basis(mat, gammas, metric=chart.metric(u))
    assert np.max(np.abs(cl.reconstruct_from_basis(c, c_mu, gammas) - mat)) <= 1e-13


def test_expand_rejects_degenerate_gammas():
    rep = cl.make_gamma_rep(1)
    bad = rep.gammas.copy()
    bad[2] = bad[2] * 0.5
    with pytest.raises(CliffordError):
        cl.expand_in_basis(cl.ID2, bad)


def test_levi_civita_values_and_contractions(rng):
    for chart in all_charts(a=0.7):
        u = np.array([rng.uniform(lo, hi) for lo, hi in chart.sample_box])
        e = cl.levi_civita_tensor(chart, u)
        # total antisymmetry
        assert np.max(np.abs(e + e.swapaxes(0, 1))) <= 1e-14
        assert np.max(np.abs(e + e.swapaxes(1, 2))) <= 1e-14
        ginv = chart.metric_inv(u)
        e_up = cl.raise_levi_civita(e, ginv)
        assert abs(np.einsum("abc,abc->", e_up, e) - 6.0) <= 1e-12
        dev = np.einsum("abc,mbc->am", e_up, e) - 2.0 * np.eye(3)
        assert np.max(np.abs(dev)) <= 1e-12


def test_levi_civita_polar_scales_with_radius():
    e = cl.levi_civita_tensor(PolarChart(), np.array([0.0, 1.8, 0.4]))
    assert np.max(np.abs(e - 1.8 * cl.EPS3)) <= 1e-12


def test_levi_civita_singular_frame():
    class DegenerateFrameChart:
        def coframe(self, u):
            return np.diag([1.0, 1.0, 0.0])

    with pytest.raises(SingularFrameError):
        cl.levi_civita_tensor(DegenerateFrameChart(), np.zeros(3))
    with pytest.raises(DomainError):
        cl.levi_civita_tensor(PolarChart(), np.array([0.0, 0.0, 0.0]))


def test_nilpotent_null_generator():
    for s in (1, -1):
        rep = cl.make_gamma_rep(s)
        n = rep.g0 - rep.g2
        assert np.max(np.abs(n @ n)) <= 1e-14


@pytest.mark.parametrize("square_sign,builder", [
    (1, lambda rep: rep.g0),
    (-1, lambda rep: rep.g1),
    (0, lambda rep: rep.g0 - rep.g2),
])
def test_exp_generator_matches_dense_exponential(square_sign, builder, rng):
    rep = cl.make_gamma_rep(-1)
    gen = builder(rep)
    for theta in rng.normal(size=6) + 1j * rng.normal(size=6):
        fast = cl.exp_generator(gen, theta, square_sign)
        dense = cl.mat_exp2(theta * gen)
        assert np.max(np.abs(fast - dense)) <= 1e-12
