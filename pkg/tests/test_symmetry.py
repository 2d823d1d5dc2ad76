import numpy as np
import pytest

from conftest import A_PARAM, random_admissible_potential, set_by_id
from diracsep import symmetry as sym
from diracsep.errors import AdmissibilityError, DomainError
from diracsep.separation import SET_IDS, get_set, make_potential, zero_potential


def test_make_killing_basic_fields():
    k = sym.make_killing(np.zeros((3, 3)), [1.0, 0.0, 0.0])
    assert np.allclose(k(np.array([3.0, -1.0, 2.0])), [1.0, 0.0, 0.0])

    rot = set_by_id("3").killing_2
    assert np.allclose(rot(np.array([0.0, 1.0, 0.0])), [0.0, 0.0, 1.0])
    assert np.allclose(rot(np.array([5.0, 0.3, -0.4])), [0.0, 0.4, 0.3])

    boost = set_by_id("4a").killing_2
    x = np.array([1.5, 0.2, 0.7])
    assert np.allclose(boost(x), [x[2], 0.0, x[0]])


def test_make_killing_rejects_symmetric_part():
    bad = np.zeros((3, 3))
    bad[0, 1] = bad[1, 0] = 0.5
    with pytest.raises(DomainError):
        sym.make_killing(bad, np.zeros(3))


def test_killing_field_satisfies_killing_equation(rng):
    pts = rng.uniform(-2, 2, size=(30, 3))
    for sid in SET_IDS:
        for k in (set_by_id(sid).killing_1, set_by_id(sid).killing_2):
            dxi = np.zeros((30, 3, 3))
            h = 1e-5
            for mu in range(3):
                step = np.zeros(3)
                step[mu] = h
                dxi[:, mu, :] = (k(pts + step) - k(pts - step)) / (2 * h)
            low = np.einsum("...mn,nb->...mb", dxi, np.diag([1.0, -1.0, -1.0]))
            assert np.max(np.abs(low + low.swapaxes(-1, -2))) <= 1e-10
            assert np.max(np.abs(np.einsum("...mm->...", dxi))) <= 1e-10


def test_phi_vector_reference_values():
    # the matrix parts of the straightened operators, by set
    assert np.allclose(sym.phi_vector(set_by_id("1").killing_2, 1), 0.0)
    for s in (1, -1):
        assert np.allclose(sym.phi_vector(set_by_id("3").killing_2, s),
                           [-s / 2, 0.0, 0.0])
        assert np.allclose(sym.phi_vector(set_by_id("4a").killing_2, s),
                           [0.0, -s / 2, 0.0])
        # sets 6/7: the invariant matrix part is -(s/2)(ghat^0 - ghat^2)
        assert np.allclose(sym.phi_vector(set_by_id("7").killing_2, s),
                           [-s / 2, 0.0, s / 2])
        assert np.allclose(sym.phi_vector(set_by_id("6").killing_2, s),
                           [-s / 2, 0.0, s / 2])


def test_set6_matrix_part_equals_chart_form():
    # -a s gamma^2(u) with gamma^2 = (ghat^0 - ghat^2)/(2a) is -(s/2)(ghat^0-ghat^2)
    cset = set_by_id("6")
    for s in (1, -1):
        _, x2 = sym.build_operator_pair(cset, zero_potential(cset), s)
        rep = x2.rep
        expect = -0.5 * s * (rep.g0 - rep.g2)
        assert np.max(np.abs(x2.matrix_part() - expect)) <= 1e-14


@pytest.mark.parametrize("sid", SET_IDS)
def test_determining_equations_random_potentials(sid, rng):
    cset = set_by_id(sid)
    for k in range(4):
        pot = random_admissible_potential(cset, rng)
        x1, x2 = sym.build_operator_pair(cset, pot, s=1)
        pts = cset.sample_cartesian(50, seed=300 + k)
        for op in (x1, x2):
            report = sym.check_determining(op, pot, pts)
            assert report.passed, report.render()


@pytest.mark.parametrize("sid", SET_IDS)
def test_commutator_certificates(sid, rng):
    cset = set_by_id(sid)
    for k in range(2):
        pot = random_admissible_potential(cset, rng)
        x1, x2 = sym.build_operator_pair(cset, pot, s=1)
        pts = cset.sample_cartesian(6, seed=400 + k)
        psi = sym.gaussian_test_spinor(seed=500 + k, center=pts.mean(axis=0))
        assert sym.commutator_residual(x1, pot, psi, pts, h=1e-3) <= 1e-4
        assert sym.commutator_residual(x2, pot, psi, pts, h=1e-3) <= 1e-4
        assert sym.pair_commutator_residual(x1, x2, pot, psi, pts, h=1e-3) <= 1e-4


def test_dirac_self_commutator_vanishes():
    from diracsep.clifford import make_gamma_rep

    cset = set_by_id("1")
    pot = make_potential(cset, ([(1, 0.5)], [(2, 0.2)], [(1, 0.3)]))
    dirac = sym.DiracOperator(rep=make_gamma_rep(1), m=1.0, potential=pot)
    psi = sym.gaussian_test_spinor(seed=3, center=(0.7, 0.7, 0.7))
    pts = cset.sample_cartesian(5, seed=8)
    res = sym.operator_commutator_residual(
        lambda f: dirac.apply(f, 1e-3), lambda f: dirac.apply(f, 1e-3), psi, pts)
    assert res == 0.0


def test_injected_phi_defect_detected():
    cset = set_by_id("1")
    pot = make_potential(cset, ([(1, 0.5)], [(2, 0.2)], [(1, 0.3)]))
    x1, _ = sym.build_operator_pair(cset, pot, 1)
    bad = x1.with_phi(lambda x, f=x1.phi: f(x) + 0.01 * np.asarray(x)[..., 1])
    report = sym.check_determining(bad, pot, cset.sample_cartesian(50, seed=3))
    assert not report.passed
    assert report.failures() == ["phi_gradient"]
    assert report.phi_gradient == pytest.approx(0.01, rel=1e-6)


def test_free_operator_all_residuals_vanish():
    cset = set_by_id("1")
    x1, _ = sym.build_operator_pair(cset, None, 1)
    report = sym.check_determining(x1, None, cset.sample_cartesian(20, seed=4))
    assert report.max_residual <= 1e-12


def test_solve_phi_closed_forms():
    cset = set_by_id("1")
    pot = make_potential(cset, ([(1, 0.5)], [(2, 0.2)], [(1, 0.3)]))
    pts = cset.sample_cartesian(20, seed=5)
    phi1 = sym.solve_phi(cset.killing_1, pot)
    assert np.max(np.abs(phi1(pts) - pot.profiles[0](pts[:, 2]))) <= 1e-12

    cset3 = set_by_id("3")
    pot3 = make_potential(cset3, ([(0, 0.0)], [(1, 0.4)], [(2, 0.25)]))
    pts3 = cset3.sample_cartesian(20, seed=6)
    phi2 = sym.solve_phi(cset3.killing_2, pot3)
    r = np.hypot(pts3[:, 1], pts3[:, 2])
    assert np.max(np.abs(phi2(pts3) - pot3.profiles[2](r))) <= 1e-12


def test_solve_phi_zero_potential_and_combination():
    cset = set_by_id("5")
    phi = sym.solve_phi(cset.killing_2, zero_potential(cset))
    assert np.max(np.abs(phi(cset.sample_cartesian(5, seed=1)))) == 0.0

    pot = make_potential(cset, ([(1, 0.5)], [(1, 0.2)], [(2, 0.3)]))
    combo = sym.make_killing(np.zeros((3, 3)),
                             2.0 * cset.killing_1.B - 0.5 * cset.killing_2.B)
    phi = sym.solve_phi(combo, pot)
    pts = cset.sample_cartesian(10, seed=2)
    u0 = pts[:, 0] - pts[:, 2]
    expect = 2.0 * pot.profiles[1](u0) - 0.5 * pot.profiles[2](u0)
    assert np.max(np.abs(phi(pts) - expect)) <= 1e-12


def test_solve_phi_gradient_matches_faraday(rng):
    cset = set_by_id("4a")
    pot = random_admissible_potential(cset, rng)
    phi = sym.solve_phi(cset.killing_2, pot)
    pts = cset.sample_cartesian(20, seed=9)
    h = 1e-4
    dphi = np.zeros((20, 3))
    for mu in range(3):
        step = np.zeros(3)
        step[mu] = h
        dphi[:, mu] = (phi(pts + step) - phi(pts - step)) / (2 * h)
    rhs = np.einsum("...mn,...n->...m", sym.faraday_fd(pot, pts),
                    cset.killing_2(pts))
    assert np.max(np.abs(dphi - rhs)) <= 1e-6


def test_solve_phi_rejects_inadmissible():
    cset = set_by_id("1")
    pot = make_potential(cset, ([(1, 0.5)], [(2, 0.2)], [(1, 0.3)]))
    with pytest.raises(AdmissibilityError):
        sym.solve_phi(set_by_id("3").killing_2, pot)


def test_build_operator_pair_rejects_foreign_potential():
    pot = make_potential(set_by_id("1"), ([(1, 0.5)], (), ()))
    with pytest.raises(AdmissibilityError):
        sym.build_operator_pair(set_by_id("2"), pot, 1)


@pytest.mark.parametrize("sid", SET_IDS)
def test_field_strength_independent_of_ignorable_coordinates(sid, rng):
    """F_{al be}, pushed to the straightened chart, depends on the reduced
    variable only."""
    cset = set_by_id(sid)
    pot = random_admissible_potential(cset, rng)
    pts_u = np.array([[np.mean(cset.reduced_range())
                       if k == cset.reduced else 0.25 + 0.1 * j for k in range(3)]
                      for j in range(3)])
    h = 1e-4
    worst = 0.0
    for ig in cset.ignorable:
        for u in pts_u:
            step = np.zeros(3)
            step[ig] = h

            def f_chart(uu):
                x = cset.chart.to_cartesian(uu)
                jac = cset.chart.jac_inverse(uu)
                far = sym.faraday_fd(pot, x)
                return np.einsum("am,bn,ab->mn", jac, jac, far)

            dev = (f_chart(u + step) - f_chart(u - step)) / (2 * h)
            worst = max(worst, float(np.max(np.abs(dev))))
    assert worst <= 1e-5
