"""Reduced two-component ODE systems and their numerical integration.

Inserting the separable ansatz into the Dirac equation leaves a linear
first-order system ``C (i d/dt) psi~ + R(t) psi~ = 0`` in the reduced
variable.  For most sets the derivative coefficient C is invertible and
``psi~' = M(t) psi~`` with ``M = i C^{-1} R``.

Sets 5 and 7 reduce along a null direction: there ``C = ghat^0 - ghat^2``
is nilpotent and the printed system is differential-algebraic of index
one.  Writing chi = psi1 - psi2 and eta = psi1 + psi2, the difference of
the two rows is the algebraic constraint eta = c(t) chi and the sum is a
scalar ODE chi' = f(t) chi; differentiating the constraint recovers an
explicit 2x2 system valid on the constraint manifold.  ``ReducedODE``
carries the constraint so initial data can be projected onto it.

Integration uses an embedded Dormand-Prince 5(4) pair with the standard
quartic dense-output interpolant, stepping the complex system directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .clifford import make_gamma_rep
from .errors import DomainError, IntegrationError
from .separation import CompleteSet, PotentialField, SpinorField, separable_ansatz

Matrix = np.ndarray


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedODE:
    """psi~'(t) = M(t) psi~(t) plus provenance and constraint data."""

    cset: CompleteSet
    potential: PotentialField
    lam1: float
    lam2: float
    m: float
    s: int
    matrix: Callable[[float], Matrix]
    deriv_coeff: Matrix
    deriv_coeff_inv: Matrix | None
    singular_points: tuple[float, ...]
    constraint_coeff: Callable[[float], complex] | None = None

    @property
    def is_constrained(self) -> bool:
        return self.constraint_coeff is not None

    def constraint_residual(self, t: float, v) -> float:
        """|eta - c(t) chi| for constrained sets, 0 otherwise."""
        if not self.is_constrained:
            return 0.0
        v = np.asarray(v, dtype=complex)
        chi = v[..., 0] - v[..., 1]
        eta = v[..., 0] + v[..., 1]
        return float(np.max(np.abs(eta - self.constraint_coeff(t) * chi)))

    def project(self, t: float, v) -> np.ndarray:
        """Project initial data onto the constraint manifold (identity if none)."""
        v = np.asarray(v, dtype=complex)
        if not self.is_constrained:
            return v.copy()
        chi = v[..., 0] - v[..., 1]
        eta = self.constraint_coeff(t) * chi
        return np.stack([(eta + chi) / 2.0, (eta - chi) / 2.0], axis=-1)


def _real_roots_in(profile_value: Callable[[np.ndarray], np.ndarray],
                   terms: list[tuple[int, float]], shift: float) -> list[float]:
    """Real roots of shift - sum(c t^p); valid for integer powers."""
    if not terms:
        return []
    min_p = min(p for p, _ in terms)
    lift = -min(0, min_p)
    coeffs: dict[int, float] = {lift: shift}
    for p, c in terms:
        coeffs[p + lift] = coeffs.get(p + lift, 0.0) - c
    deg = max(coeffs)
    poly = np.array([coeffs.get(k, 0.0) for k in range(deg, -1, -1)])
    if np.allclose(poly, 0.0):
        return [0.0]
    roots = np.roots(poly)
    return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9)


def _singular_points(cset: CompleteSet, potential: PotentialField,
                     dae_shift: tuple[float, int] | None) -> tuple[float, ...]:
    points: set[float] = set()
    if cset.set_id in ("3", "4a", "4b", "7"):
        points.add(0.0)
    for p in potential.profiles:
        if p.has_pole:
            points.add(0.0)
    if dae_shift is not None:
        lam, comp = dae_shift
        prof = potential.profiles[comp]
        for r in _real_roots_in(prof, list(prof.terms), lam):
            points.add(r)
    return tuple(sorted(points))


def reduce(cset: CompleteSet, potential: PotentialField, lam1: float, lam2: float,
           m: float, s: int) -> ReducedODE:
    """Assemble the reduced system for a set and admissible potential."""
    if potential.cset.set_id != cset.set_id:
        raise DomainError(f"potential belongs to set {potential.cset.set_id}, "
                          f"not {cset.set_id}")
    if m <= 0.0:
        raise DomainError("only the massive case m > 0 is covered")
    rep = make_gamma_rep(s)
    g0, g1, g2 = rep.g0, rep.g1, rep.g2
    nul = g0 - g2
    pls = g0 + g2
    ident = np.eye(2, dtype=complex)
    a0, a1, a2 = potential.profiles
    sid = cset.set_id

    def make_plain(cmat: Matrix, rest: Callable[[float], Matrix]) -> ReducedODE:
        det = np.linalg.det(cmat)
        if abs(det) < 1e-12:
            raise IntegrationError(
                f"derivative coefficient unexpectedly singular for set {sid}")
        cinv = np.linalg.inv(cmat)

        def mfun(t: float) -> Matrix:
            return 1j * cinv @ rest(t)

        return ReducedODE(cset=cset, potential=potential, lam1=lam1, lam2=lam2,
                          m=m, s=s, matrix=mfun, deriv_coeff=cmat,
                          deriv_coeff_inv=cinv,
                          singular_points=_singular_points(cset, potential, None))

    if sid == "1":
        def rest(t):
            return (g0 * (lam1 - a0(t)) + g1 * (lam2 - a1(t))
                    - g2 * a2(t) - m * ident)
        return make_plain(g2, rest)

    if sid == "2":
        def rest(t):
            return (-g0 * a0(t) + g1 * (lam1 - a1(t))
                    + g2 * (lam2 - a2(t)) - m * ident)
        return make_plain(g0, rest)

    if sid == "3":
        spin_shift = 0.5 * s * (g2 @ g0)

        def rest(t):
            return (g0 * (lam1 - a0(t)) - g1 * a1(t)
                    + (g2 * (lam2 - a2(t)) + spin_shift) / t - m * ident)
        return make_plain(g1, rest)

    if sid in ("4a", "4b"):
        eps = cset.chart.eps
        lead, inner = (g0, g2) if sid == "4a" else (g2, g0)

        def rest(t):
            return (-eps * lead * a0(t) + g1 * (lam1 - a1(t))
                    + eps * inner * (lam2 - a2(t)) / t - m * ident)
        return make_plain(eps * lead, rest)

    if sid == "6":
        a = cset.a

        def rest(t):
            return (2.0 * a * g1 * a0(t)
                    + nul * (lam2 - a2(t)) / (2.0 * a)
                    + (pls + nul * t / (2.0 * a ** 2)) * (lam1 - a1(t))
                    - m * ident)
        return make_plain(-2.0 * a * g1, rest)

    # sets 5 and 7: index-1 DAE along the null direction
    da1, da2 = a1.derivative(), a2.derivative()
    if sid == "5":
        def beta(t):
            return -a0(t) + 0.0j

        def pq(t):
            return lam2 - a2(t), lam1 - a1(t)

        def pq_prime(t):
            return -da2(t), -da1(t)
        shift = (lam2, 2)
    else:  # set 7
        def beta(t):
            return 0.5j / t - a0(t)

        def pq(t):
            return lam1 - a1(t), (lam2 - a2(t)) / t

        def pq_prime(t):
            return -da1(t), -da2(t) / t - (lam2 - a2(t)) / t ** 2
        shift = (lam1, 1)

    def c_of(t: float) -> complex:
        p, q = pq(t)
        return (m + 1j * s * q) / (2.0 * p)

    def f_of(t: float) -> complex:
        p, q = pq(t)
        return 1j * beta(t) - 0.25j * (m * m + q * q) / p

    def mfun(t: float) -> Matrix:
        p, q = pq(t)
        dp, dq = pq_prime(t)
        c = (m + 1j * s * q) / (2.0 * p)
        cp = (1j * s * dq * p - (m + 1j * s * q) * dp) / (2.0 * p * p)
        f = 1j * beta(t) - 0.25j * (m * m + q * q) / p
        g_hi = 0.5 * (cp + c * f + f)
        g_lo = 0.5 * (cp + c * f - f)
        return np.array([[g_hi, -g_hi], [g_lo, -g_lo]], dtype=complex)

    return ReducedODE(cset=cset, potential=potential, lam1=lam1, lam2=lam2,
                      m=m, s=s, matrix=mfun, deriv_coeff=nul.astype(complex),
                      deriv_coeff_inv=None,
                      singular_points=_singular_points(cset, potential, shift),
                      constraint_coeff=c_of)


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) with dense output
# ---------------------------------------------------------------------------

_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])
_DP_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
                  -10690763975 / 1880347072, 701980252875 / 199316789632,
                  -1453857185 / 822651844, 69997945 / 29380423])


@dataclass
class Trajectory:
    """Accepted nodes, values, dense interpolant, and integrator statistics."""

    ts: np.ndarray
    ys: np.ndarray
    cont: np.ndarray         # (nseg, 5, dim) dense-output coefficients
    stats: dict = field(default_factory=dict)
    ode: ReducedODE | None = None

    @property
    def t_start(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        lo, hi = min(self.t_start, self.t_end), max(self.t_start, self.t_end)
        pad = 1e-9 * max(1.0, hi - lo)
        if np.any(t < lo - pad) or np.any(t > hi + pad):
            raise DomainError(
                f"evaluation outside trajectory range [{lo}, {hi}]")
        if len(self.ts) == 1:
            return np.broadcast_to(self.ys[0], t.shape + (self.ys.shape[-1],)).copy()
        ts = self.ts
        ascending = ts[-1] >= ts[0]
        tq = t if ascending else -t
        knots = ts if ascending else -ts
        idx = np.clip(np.searchsorted(knots, tq, side="right") - 1, 0, len(ts) - 2)
        t0 = ts[idx]
        hseg = ts[idx + 1] - ts[idx]
        theta = (t - t0) / hseg
        r1, r2, r3, r4, r5 = (self.cont[idx, k] for k in range(5))
        th = theta[..., None]
        return r1 + th * (r2 + (1.0 - th) * (r3 + th * (r4 + (1.0 - th) * r5)))

    def to_csv(self) -> str:
        lines = ["t,re_psi1,im_psi1,re_psi2,im_psi2"]
        for t, y in zip(self.ts, self.ys):
            lines.append("%.17g,%.17g,%.17g,%.17g,%.17g"
                         % (t, y[0].real, y[0].imag, y[1].real, y[1].imag))
        return "\n".join(lines) + "\n"


def _error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray,
                rel_tol: float, abs_tol: float) -> float:
    scale = abs_tol + rel_tol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(fun, t0: float, y0: np.ndarray, direction: float,
                  rel_tol: float, abs_tol: float) -> float:
    f0 = fun(t0, y0)
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = float(np.sqrt(np.mean(np.abs(y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = fun(t0 + h0 * direction, y1)
    d2 = float(np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


def integrate(ode: ReducedODE, t_start: float, t_end: float, init,
              rel_tol: float = 1e-10, abs_tol: float = 1e-12,
              max_steps: int = 200_000) -> Trajectory:
    """Adaptive integration of the reduced system with dense output.

    For the constrained (null-direction) sets the initial value is first
    projected onto the constraint manifold; data in its kernel is
    rejected because the projected problem would be identically zero.
    """
    init = np.asarray(init, dtype=complex)
    if np.max(np.abs(init)) == 0.0:
        raise DomainError("initial spinor must be nonzero")
    lo, hi = min(t_start, t_end), max(t_start, t_end)
    for sp in ode.singular_points:
        if lo - 1e-12 <= sp <= hi + 1e-12:
            raise DomainError(
                f"integration interval [{lo}, {hi}] contains the singular point {sp}")

    y0 = ode.project(t_start, init)
    if ode.is_constrained and np.max(np.abs(y0)) < 1e-14 * np.max(np.abs(init)):
        raise DomainError("initial spinor lies in the constraint kernel "
                          "(psi1 = psi2 carries no data for this set)")

    def fun(t, y):
        return ode.matrix(t) @ y

    stats = {"steps": 0, "rejected": 0, "nfev": 0,
             "rel_tol": rel_tol, "abs_tol": abs_tol}
    if t_end == t_start:
        traj = Trajectory(ts=np.array([t_start]), ys=y0[None, :].copy(),
                          cont=np.zeros((0, 5, 2), dtype=complex),
                          stats=stats, ode=ode)
        return traj

    direction = 1.0 if t_end > t_start else -1.0
    t, y = t_start, y0.copy()
    k1 = fun(t, y)
    stats["nfev"] += 1
    h = _initial_step(fun, t, y, direction, rel_tol, abs_tol)
    stats["nfev"] += 2
    h = min(h, abs(t_end - t_start))

    ts = [t]
    ys = [y.copy()]
    cont = []
    while (t - t_end) * direction < 0.0:
        if stats["steps"] + stats["rejected"] > max_steps:
            raise IntegrationError(f"step limit exceeded at t={t}")
        h = min(h, abs(t_end - t))
        if h < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t}")
        hs = h * direction
        k = [k1]
        for i in range(1, 7):
            yi = y + hs * sum(aij * kj for aij, kj in zip(_DP_A[i], k))
            k.append(fun(t + _DP_C[i] * hs, yi))
        stats["nfev"] += 6
        k = np.array(k)
        y_new = y + hs * np.tensordot(_DP_B5, k, axes=1)
        y_err = hs * np.tensordot(_DP_B5 - _DP_B4, k, axes=1)
        err = _error_norm(y_err, y, y_new, rel_tol, abs_tol)
        if err <= 1.0:
            ydiff = y_new - y
            bspl = hs * k[0] - ydiff
            r5 = hs * np.tensordot(_DP_D, k, axes=1)
            cont.append(np.stack([y, ydiff, bspl, ydiff - hs * k[6] - bspl, r5]))
            t += hs
            y = y_new
            k1 = k[6]  # first-same-as-last
            ts.append(t)
            ys.append(y.copy())
            stats["steps"] += 1
        else:
            stats["rejected"] += 1
        factor = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, factor))

    return Trajectory(ts=np.array(ts), ys=np.array(ys),
                      cont=np.array(cont) if cont else np.zeros((0, 5, 2), complex),
                      stats=stats, ode=ode)


def reconstruct(trajectory: Trajectory, cset: CompleteSet | None = None,
                lam1: float | None = None, lam2: float | None = None,
                s: int | None = None, m: float | None = None,
                potential: PotentialField | None = None) -> SpinorField:
    """Full Cartesian solution built from an integrated reduced system.

    Provenance defaults come from the trajectory's ReducedODE.
    """
    ode = trajectory.ode
    if ode is None and None in (cset, lam1, lam2, s, m):
        raise DomainError("trajectory carries no provenance; pass it explicitly")
    return separable_ansatz(
        cset if cset is not None else ode.cset,
        lam1 if lam1 is not None else ode.lam1,
        lam2 if lam2 is not None else ode.lam2,
        s if s is not None else ode.s,
        m if m is not None else ode.m,
        trajectory,
        potential if potential is not None else (ode.potential if ode else None))
