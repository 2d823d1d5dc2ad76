import numpy as np
import pytest

from conftest import PIPELINE_CASES, set_by_id
from diracsep import reduction as red
from diracsep import separation as sep
from diracsep import verification as ver
from diracsep.errors import DomainError
from diracsep.symmetry import build_operator_pair


def exact_free_plane_wave(lam1=2.0, lam2=0.0, m=1.0, s=1):
    """Closed-form solution of the free equation via the set-1 reduction."""
    cset = set_by_id("1")
    ode = red.reduce(cset, sep.zero_potential(cset), lam1, lam2, m, s)
    mat = ode.matrix(0.0)
    w, v = np.linalg.eig(mat)
    psi_tilde = lambda t: np.exp(w[0] * np.asarray(t))[..., None] * v[:, 0]
    fld = sep.separable_ansatz(cset, lam1, lam2, s, m, psi_tilde,
                               potential=sep.zero_potential(cset))
    return fld, cset


def test_exact_plane_wave_residual():
    fld, cset = exact_free_plane_wave()
    grid = ver.grid_points(cset.cartesian_box, 7)
    report = ver.dirac_residual(fld, None, grid, h=1e-4)
    assert report.relative < 1e-7
    assert report.passed
    assert report.relative == report.max_residual / report.max_field


def test_wrong_separation_constant_detected():
    fld, cset = exact_free_plane_wave()
    wrong = sep.separable_ansatz(cset, fld.lam1, fld.lam2 + 0.1, fld.s, fld.m,
                                 fld.psi_tilde)
    grid = ver.grid_points(cset.cartesian_box, 5)
    report = ver.dirac_residual(wrong, None, grid, h=1e-4)
    assert report.relative > 1e-2
    assert not report.passed


def test_eigen_residual_plane_wave_and_defect():
    fld, cset = exact_free_plane_wave()
    grid = ver.grid_points(cset.cartesian_box, 4)
    x1, x2 = build_operator_pair(cset, None, 1)
    assert ver.eigen_residual(fld, x1, 2.0, grid, h=1e-5) < 1e-8
    assert ver.eigen_residual(fld, x1, 3.0, grid, h=1e-5) > 0.5


def test_convergence_order_second_order_stencil():
    fld, cset = exact_free_plane_wave()
    grid = ver.grid_points(cset.cartesian_box, 4)
    factor = ver.convergence_factor(fld, None, grid, h=1e-3)
    assert 3.0 <= factor <= 5.0


def test_report_render_and_csv():
    fld, cset = exact_free_plane_wave()
    grid = ver.grid_points(cset.cartesian_box, 3)
    report = ver.dirac_residual(fld, None, grid)
    text = report.render()
    assert "relative_residual" in text and "status: pass" in text
    csv = report.to_csv(grid)
    assert csv.splitlines()[0] == "x0,x1,x2,residual,field"
    assert len(csv.strip().splitlines()) == len(grid) + 1


def test_grid_points_shape():
    grid = ver.grid_points(((0, 1), (0, 2), (0, 3)), 5)
    assert grid.shape == (125, 3)
    assert grid[0] @ grid[0] == 0.0


@pytest.mark.parametrize("sid", sep.SET_IDS)
def test_pipeline_residual_each_set(sid):
    profiles, (lam1, lam2) = PIPELINE_CASES[sid]
    cset = set_by_id(sid)
    pot = sep.make_potential(cset, profiles)
    ode = red.reduce(cset, pot, lam1, lam2, 1.0, 1)
    lo, hi = cset.reduced_range()
    traj = red.integrate(ode, lo, hi, np.array([1.0, 0.3j]))
    fld = red.reconstruct(traj)
    grid = ver.grid_points(cset.cartesian_box, 7)
    report = ver.dirac_residual(fld, pot, grid, h=1e-4)
    assert report.relative <= 1e-5, f"set {sid}: {report.relative}"


def test_chart_independence_set3():
    """Cartesian residual on phi_C and polar residual on psi agree in verdict."""
    profiles, (lam1, lam2) = PIPELINE_CASES["3"]
    cset = set_by_id("3")
    pot = sep.make_potential(cset, profiles)
    ode = red.reduce(cset, pot, lam1, lam2, 1.0, 1)
    lo, hi = cset.reduced_range()
    traj = red.integrate(ode, lo, hi, np.array([1.0, 0.3j]))
    fld = red.reconstruct(traj)

    grid = ver.grid_points(cset.cartesian_box, 5)
    cart = ver.dirac_residual(fld, pot, grid, h=1e-4)

    grid_u = ver.grid_points(((0.2, 1.0), (1.2, 1.8), (0.3, 1.0)), 5)
    hpsi = ver.dirac_apply_chart(cset.chart, fld.chart_eval, pot, 1.0, 1,
                                 grid_u, h=1e-4)
    vals = fld.chart_eval(grid_u)
    rel_polar = (np.max(np.linalg.norm(hpsi, axis=-1))
                 / np.max(np.linalg.norm(vals, axis=-1)))
    assert cart.passed and rel_polar <= 1e-5

    # and both flag the same injected defect
    wrong = sep.SpinorField(cset=cset, lam1=lam1, lam2=lam2 + 0.1, s=1, m=1.0,
                            psi_tilde=traj, potential=pot)
    cart_bad = ver.dirac_residual(wrong, pot, grid, h=1e-4)
    hpsi_bad = ver.dirac_apply_chart(cset.chart, wrong.chart_eval, pot, 1.0, 1,
                                     grid_u, h=1e-4)
    rel_polar_bad = (np.max(np.linalg.norm(hpsi_bad, axis=-1))
                     / np.max(np.linalg.norm(vals, axis=-1)))
    assert not cart_bad.passed and rel_polar_bad > 1e-2


def test_vanishing_field_rejected():
    fld, cset = exact_free_plane_wave()
    zero = sep.separable_ansatz(cset, 0.0, 0.0, 1, 1.0,
                                lambda t: np.zeros(np.shape(t) + (2,)))
    with pytest.raises(DomainError):
        ver.dirac_residual(zero, None, ver.grid_points(cset.cartesian_box, 3))
