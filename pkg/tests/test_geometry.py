import numpy as np
import pytest

from diracsep import clifford as cl
from diracsep import geometry as ge
from diracsep.errors import DomainError

REP = cl.make_gamma_rep(1)


def sample(chart, rng):
    return np.array([rng.uniform(lo, hi) for lo, hi in chart.sample_box])


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_roundtrip_and_pullback(chart, rng):
    for _ in range(25):
        u = sample(chart, rng)
        assert ge.roundtrip_error(chart, u) <= 1e-10
        g = chart.metric(u)
        assert np.max(np.abs(ge.metric_pullback(chart, u) - g)) <= 1e-10
        assert np.max(np.abs(np.linalg.inv(chart.metric_inv(u)) - g)) <= 1e-10


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_triad_reconstructs_metric(chart, rng):
    for _ in range(100):
        u = sample(chart, rng)
        co = chart.coframe(u)
        assert np.max(np.abs(co.T @ cl.ETA @ co - chart.metric(u))) <= 1e-12


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_closed_form_christoffel_against_fd(chart, rng):
    for _ in range(10):
        u = sample(chart, rng)
        gam = chart.christoffel(u)
        assert np.max(np.abs(gam - gam.swapaxes(1, 2))) == 0.0
        assert np.max(np.abs(gam - ge.christoffel_fd(chart, u))) <= 1e-6


def test_christoffel_reference_values():
    pol = ge.PolarChart()
    gam = pol.christoffel(np.array([0.0, 1.5, 0.2]))
    assert gam[1, 2, 2] == -1.5
    assert gam[2, 1, 2] == pytest.approx(1 / 1.5, abs=1e-15)
    assert np.max(np.abs(ge.CartesianChart().christoffel(np.zeros(3)))) == 0.0
    par = ge.NullParabolicChart(a=0.7)
    gam = par.christoffel(np.array([0.4, -0.3, 0.8]))
    assert gam[0, 2, 2] == pytest.approx(-1.96, abs=1e-15)
    assert gam[1, 2, 0] == pytest.approx(-1 / 0.7, abs=1e-15)
    rin = ge.RindlerTChart()
    gam = rin.christoffel(np.array([1.2, 0.0, 0.4]))
    assert gam[0, 2, 2] == 1.2 and gam[2, 0, 2] == pytest.approx(1 / 1.2)
    pro = ge.NullProjectiveChart()
    gam = pro.christoffel(np.array([0.8, 0.1, 0.2]))
    assert gam[1, 2, 2] == pytest.approx(2 * 0.8, abs=1e-15)
    assert gam[2, 2, 0] == pytest.approx(1 / 0.8, abs=1e-15)


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_flatness_by_finite_differences(chart, rng):
    for _ in range(8):
        u = sample(chart, rng)
        assert np.max(np.abs(ge.riemann_fd(chart, u, h=1e-3))) <= 1e-5


def test_riemann_fd_margin_error():
    with pytest.raises(DomainError):
        ge.riemann_fd(ge.PolarChart(), np.array([0.0, 1.5e-3, 0.0]), h=1e-3)


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_metric_compatibility(chart, rng):
    for _ in range(6):
        assert ge.metric_compat_fd(chart, sample(chart, rng)) <= 1e-6


@pytest.mark.parametrize("s", [1, -1])
def test_polar_spinor_connection_closed_form(s):
    rep = cl.make_gamma_rep(s)
    conn = ge.spinor_connection(ge.PolarChart(), np.array([0.2, 1.4, -0.5]), rep)
    assert np.max(np.abs(conn[0])) <= 1e-14
    assert np.max(np.abs(conn[1])) <= 1e-14
    assert np.max(np.abs(conn[2] + 0.5j * s * cl.SIGMA3)) <= 1e-14


@pytest.mark.parametrize("chart", ge.all_charts(a=0.7), ids=lambda c: c.chart_id)
def test_spinor_connection_traceless_and_compatible(chart, rng):
    for s in (1, -1):
        rep = cl.make_gamma_rep(s)
        for _ in range(6):
            u = sample(chart, rng)
            conn = ge.spinor_connection(chart, u, rep)
            assert np.max(np.abs(np.trace(conn, axis1=-2, axis2=-1))) <= 1e-12
            assert ge.spinor_compat_residual(chart, u, rep) <= 1e-8


@pytest.mark.parametrize("chart_id", ["cartesian", "null_plane", "rindler_t",
                                      "rindler_x", "null_parabolic", "null_projective"])
def test_gradient_frames_have_vanishing_connection(chart_id, rng):
    chart = ge.make_chart(chart_id, **({"a": 0.7} if chart_id == "null_parabolic" else {}))
    for _ in range(5):
        u = sample(chart, rng)
        assert np.max(np.abs(ge.spinor_connection(chart, u, REP))) <= 1e-12


def test_momentum_constant_spinor_and_plane_wave():
    cart = ge.CartesianChart()
    const = lambda u: np.broadcast_to(np.array([1.0, -0.5j]), np.asarray(u).shape[:-1] + (2,))
    out = ge.momentum_apply(cart, REP, None, const, np.array([0.1, 0.2, 0.3]))
    assert np.max(np.abs(out)) <= 1e-12

    lam = 1.3
    wave = lambda u: np.exp(-1j * lam * np.asarray(u)[..., 0])[..., None] * np.array([1.0, 0.5])
    point = np.array([0.2, -0.1, 0.4])
    out = ge.momentum_apply(cart, REP, None, wave, point, h=1e-4)
    assert np.max(np.abs(out[0] - lam * wave(point))) <= 1e-7
    assert np.max(np.abs(out[1])) + np.max(np.abs(out[2])) <= 1e-12


def test_momentum_polar_transport_oracle():
    """P in polar equals the Cartesian P transported through the chart map.

    The spinor components rotate with the local frame, so the transport
    uses the same spin factor that links chart and Cartesian solutions.
    """
    from diracsep.separation import get_set, spin_factor
    from diracsep.symmetry import gaussian_test_spinor

    pol = ge.PolarChart()
    cart = ge.CartesianChart()
    cs3 = get_set(3)
    psi_c = gaussian_test_spinor(seed=11, center=(0.3, 1.4, 0.9))
    s = 1

    def psi_polar(u):
        u = np.asarray(u, dtype=float)
        x = pol.to_cartesian(u)
        fac = spin_factor(cs3, u, s)
        return np.einsum("...ij,...j->...i", np.linalg.inv(fac), psi_c(x))

    u0 = np.array([0.25, 1.5, 0.55])
    x0 = pol.to_cartesian(u0)
    lhs = ge.momentum_apply(pol, REP, None, psi_polar, u0, h=1e-4)
    pc = ge.momentum_apply(cart, REP, None, psi_c, x0, h=1e-4)
    jac = pol.jac_inverse(u0)
    fac = spin_factor(cs3, u0[None, :], s)[0]
    rhs = np.einsum("an,ij,aj->ni", jac, np.linalg.inv(fac), pc)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6


def test_flat_momentum_commutator_is_faraday():
    """([P_nu, P_mu] + i F_{nu mu}) psi vanishes in Cartesian coordinates."""
    from diracsep.separation import get_set, make_potential
    from diracsep.symmetry import faraday_fd, fd_partial, gaussian_test_spinor

    cs = get_set(1)
    pot = make_potential(cs, ([(2, 0.4)], [(1, 0.3)], [(2, 0.2)]))
    field = gaussian_test_spinor(seed=5, center=(0.7, 0.7, 0.7))
    pts = cs.sample_cartesian(5, seed=9)
    h = 1e-3

    def p_apply(n):
        def ap(f):
            def out(x):
                x = np.asarray(x, dtype=float)
                return (1j * fd_partial(f, x, n, h)
                        - pot.cartesian(x)[..., n, None] * np.asarray(f(x)))
            return out
        return ap

    far = faraday_fd(pot, pts)
    worst = 0.0
    for nu in range(3):
        for mu in range(3):
            ab = p_apply(nu)(p_apply(mu)(field))(pts)
            ba = p_apply(mu)(p_apply(nu)(field))(pts)
            dev = (ab - ba) + 1j * far[:, nu, mu, None] * field(pts)
            worst = max(worst, float(np.max(np.abs(dev))))
    assert worst <= 1e-5


def test_make_chart_registry():
    assert ge.make_chart("polar").chart_id == "polar"
    assert ge.make_chart("null_parabolic", a=2.0).a == 2.0
    with pytest.raises(DomainError):
        ge.make_chart("nope")
    with pytest.raises(DomainError):
        ge.make_chart("null_parabolic", a=1e-5)
    with pytest.raises(DomainError):
        ge.make_chart("rindler_t", eps=3)


def test_wedge_domain_checks():
    rin = ge.RindlerTChart()
    with pytest.raises(DomainError):
        rin.from_cartesian(np.array([0.5, 0.0, 1.0]))  # wrong wedge
    with pytest.raises(DomainError):
        rin.from_cartesian(np.array([-1.0, 0.0, 0.2]))  # eps mismatch
    assert ge.RindlerTChart(eps=-1).contains_cartesian(np.array([-1.0, 0.0, 0.2]))
    pro = ge.NullProjectiveChart()
    with pytest.raises(DomainError):
        pro.from_cartesian(np.array([0.0, 0.0, 1.0]))  # x0 - x2 < 0
