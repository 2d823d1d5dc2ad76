"""Independent certification of candidate solutions.

The only trusted ingredient here is the flat Cartesian Dirac operator
``H = ghat^al (i d_al - A_al(x)) - m`` applied by central differences on
a sample grid.  A reconstructed separable solution is accepted when the
relative residual ``max|H phi_C| / max|phi_C|`` sits at the truncation
floor of the stencil; eigen-relation checks ``X phi_C = lambda phi_C``
certify the symmetry operators the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import make_gamma_rep
from .errors import DomainError
from .geometry import Chart
from .symmetry import SymmetryOperator, _cartesian_potential_fn, fd_partial


def grid_points(box, n: int = 11) -> np.ndarray:
    """Uniform n^3 grid over a Cartesian box ((lo, hi), ...) as (n^3, 3)."""
    axes = [np.linspace(lo, hi, n) for lo, hi in box]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return mesh.reshape(-1, 3)


@dataclass(frozen=True)
class ResidualReport:
    """Grid residuals of a candidate solution against the Dirac operator."""

    grid_shape: tuple[int, ...]
    box: tuple[tuple[float, float], ...] | None
    h: float
    tol: float
    max_residual: float
    max_field: float
    rms_residual: float
    residuals: np.ndarray  # per-point |H phi|
    fields: np.ndarray     # per-point |phi|

    @property
    def relative(self) -> float:
        return self.max_residual / self.max_field

    @property
    def relative_rms(self) -> float:
        return self.rms_residual / self.max_field

    @property
    def passed(self) -> bool:
        return self.relative <= self.tol

    def render(self) -> str:
        lines = [
            f"grid_points: {int(np.prod(self.grid_shape))}",
            f"fd_step: {self.h:.3e}",
            f"max_field: {self.max_field:.6e}",
            f"max_residual: {self.max_residual:.6e}",
            f"relative_residual: {self.relative:.6e}",
            f"relative_rms: {self.relative_rms:.6e}",
            f"tolerance: {self.tol:.3e}",
            f"status: {'pass' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines)

    def to_csv(self, grid: np.ndarray) -> str:
        lines = ["x0,x1,x2,residual,field"]
        for p, r, f in zip(grid, self.residuals, self.fields):
            lines.append("%.17g,%.17g,%.17g,%.17g,%.17g" % (p[0], p[1], p[2], r, f))
        return "\n".join(lines) + "\n"


def dirac_apply_cartesian(field, potential, m: float, s: int, points: np.ndarray,
                          h: float = 1e-4) -> np.ndarray:
    """(H phi)(x) on an array of Cartesian points via central differences."""
    rep = make_gamma_rep(s)
    a_fn = _cartesian_potential_fn(potential)
    points = np.asarray(points, dtype=float)
    psi = np.asarray(field(points), dtype=complex)
    terms = np.zeros(points.shape[:-1] + (3, 2), dtype=complex)
    for nu in range(3):
        terms[..., nu, :] = 1j * fd_partial(field, points, nu, h)
    if a_fn is not None:
        terms -= np.asarray(a_fn(points))[..., None] * psi[..., None, :]
    return np.einsum("nij,...nj->...i", rep.gammas, terms) - m * psi


def dirac_residual(field, potential, grid: np.ndarray, h: float = 1e-4,
                   tol: float = 1e-5, m: float | None = None,
                   s: int | None = None, box=None) -> ResidualReport:
    """Relative Dirac residual of a (Cartesian-evaluable) spinor field.

    Mass and sign default to the field's provenance.  The grid must lie
    inside the field's evaluable region with margin h.
    """
    grid = np.asarray(grid, dtype=float)
    m = float(field.m) if m is None else m
    s = int(field.s) if s is None else s
    res = dirac_apply_cartesian(field, potential, m, s, grid, h)
    vals = np.asarray(field(grid), dtype=complex)
    res_norm = np.linalg.norm(res, axis=-1)
    field_norm = np.linalg.norm(vals, axis=-1)
    max_field = float(np.max(field_norm))
    if max_field == 0.0:
        raise DomainError("candidate field vanishes on the whole grid")
    return ResidualReport(
        grid_shape=grid.shape[:-1], box=box, h=h, tol=tol,
        max_residual=float(np.max(res_norm)), max_field=max_field,
        rms_residual=float(np.sqrt(np.mean(res_norm ** 2))),
        residuals=res_norm, fields=field_norm)


def eigen_residual(field, op: SymmetryOperator, lam: float, grid: np.ndarray,
                   h: float = 1e-4, potential=None) -> float:
    """max |X phi_C - lambda phi_C| / max |phi_C| over the grid."""
    grid = np.asarray(grid, dtype=float)
    if potential is None:
        potential = getattr(field, "potential", None)
    applied = op.apply(field, potential, h)
    dev = applied(grid) - lam * np.asarray(field(grid), dtype=complex)
    vals = np.linalg.norm(np.asarray(field(grid), dtype=complex), axis=-1)
    return float(np.max(np.linalg.norm(dev, axis=-1)) / np.max(vals))


def convergence_factor(field, potential, grid: np.ndarray, h: float = 1e-3,
                       m: float | None = None, s: int | None = None) -> float:
    """Residual ratio between steps h and h/2 (≈4 for second-order stencils)."""
    r1 = dirac_residual(field, potential, grid, h=h, m=m, s=s)
    r2 = dirac_residual(field, potential, grid, h=h / 2.0, m=m, s=s)
    return r1.relative / r2.relative


def dirac_apply_chart(chart: Chart, field, potential, m: float, s: int,
                      points_u: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """(H psi)(u) in a curvilinear chart, spinor connection included.

    ``field`` maps chart points to 2-spinors, ``potential`` provides
    chart components A_nu(u) (or None).  Pointwise evaluation; intended
    for modest cross-check grids.
    """
    from .clifford import curved_gamma
    from .geometry import spinor_connection

    rep = make_gamma_rep(s)
    points_u = np.asarray(points_u, dtype=float)
    single = points_u.ndim == 1
    pts = points_u[None, :] if single else points_u.reshape(-1, 3)
    out = np.zeros((len(pts), 2), dtype=complex)
    for i, u in enumerate(pts):
        gammas = curved_gamma(rep, chart, u)
        conn = spinor_connection(chart, u, rep)
        psi = np.asarray(field(u), dtype=complex)
        a = np.zeros(3) if potential is None else np.asarray(
            potential.chart_components(u) if hasattr(potential, "chart_components")
            else potential(u))
        acc = -m * psi
        for nu in range(3):
            step = np.zeros(3)
            step[nu] = h
            dpsi = (np.asarray(field(u + step), dtype=complex)
                    - np.asarray(field(u - step), dtype=complex)) / (2.0 * h)
            acc = acc + gammas[nu] @ (1j * (dpsi + conn[nu] @ psi) - a[nu] * psi)
        out[i] = acc
    return out[0] if single else out.reshape(points_u.shape[:-1] + (2,))
