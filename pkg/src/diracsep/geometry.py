"""Charts of flat (2+1)-dimensional spacetime.

Each chart packages a named curvilinear coordinate system ``u`` on (a
wedge of) Minkowski space: the coordinate maps in both directions, the
metric, a frame field (triad), closed-form Christoffel symbols, and the
analytic Jacobians needed to transport vectors and covectors.  All of it
is cross-checkable: the metric must equal the pullback of
``diag(1, -1, -1)`` through the inverse map, the frame must reconstruct
the metric, and finite-difference curvature must vanish.

Two kinds of frames appear.  The polar chart uses the familiar rotating
orthonormal frame, which carries a nonvanishing spinor connection.  All
other curvilinear charts use the coordinate-gradient frame
``e^mu_a = d u_mu / d x^a``; its legs are the constant Cartesian
coordinate vectors, so the spinor connection vanishes identically.

Points are numpy arrays of shape ``(3,)``; the coordinate maps and
Jacobians also accept batches of shape ``(..., 3)``.
"""

from __future__ import annotations

import abc
from typing import Callable

import numpy as np

from .clifford import ETA, GammaRep, curved_gamma
from .errors import DomainError

_DELTA = 1e-6  # default exclusion margin around horizons / the polar axis


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise ValueError(f"points must have trailing dimension 3, got shape {x.shape}")
    return x


class Chart(abc.ABC):
    """A named coordinate system on flat (2+1) spacetime."""

    chart_id: str = ""
    #: per-coordinate (lo, hi) box safely inside the domain, for sampling
    sample_box: tuple[tuple[float, float], ...] = ((-1.0, 1.0),) * 3
    #: True when the validity domain bounds the reduced-style coordinate u0 away from 0
    delta: float = _DELTA

    # -- coordinate maps -------------------------------------------------

    @abc.abstractmethod
    def to_cartesian(self, u) -> np.ndarray:
        """Inverse map x(u); raises DomainError outside the chart domain."""

    @abc.abstractmethod
    def from_cartesian(self, x) -> np.ndarray:
        """Forward map u(x); raises DomainError outside the chart's wedge."""

    @abc.abstractmethod
    def jac_forward(self, x) -> np.ndarray:
        """J[mu, al] = d u^mu / d x^al evaluated at the Cartesian point x."""

    @abc.abstractmethod
    def jac_inverse(self, u) -> np.ndarray:
        """J[al, mu] = d x^al / d u^mu evaluated at the chart point u."""

    # -- pointwise geometry ----------------------------------------------

    @abc.abstractmethod
    def metric(self, u) -> np.ndarray:
        """Covariant metric g_{mu nu}(u), shape (3, 3)."""

    @abc.abstractmethod
    def metric_inv(self, u) -> np.ndarray:
        """Contravariant metric g^{mu nu}(u)."""

    @abc.abstractmethod
    def frame(self, u) -> np.ndarray:
        """Triad E[mu, a] = e^mu_a with gamma^mu = E[mu, a] ghat^a."""

    @abc.abstractmethod
    def frame_deriv(self, u) -> np.ndarray:
        """D[nu, mu, a] = d/du^nu e^mu_a (analytic)."""

    @abc.abstractmethod
    def christoffel(self, u) -> np.ndarray:
        """Closed-form G[mu, nu, al] = Gamma^mu_{nu al}."""

    def coframe(self, u) -> np.ndarray:
        """Inverse triad F[a, mu] = e^a_mu."""
        return np.linalg.inv(self.frame(u))

    # -- domain -----------------------------------------------------------

    def contains(self, u) -> bool:
        """True when the chart point lies inside the validity domain."""
        u = _as_points(u)
        return bool(np.all(self._inside_u(u)))

    def contains_cartesian(self, x) -> bool:
        x = _as_points(x)
        return bool(np.all(self._inside_x(x)))

    def _inside_u(self, u) -> np.ndarray:
        return np.ones(u.shape[:-1], dtype=bool)

    def _inside_x(self, x) -> np.ndarray:
        return np.ones(x.shape[:-1], dtype=bool)

    def _require_u(self, u) -> np.ndarray:
        u = _as_points(u)
        if not np.all(self._inside_u(u)):
            raise DomainError(f"point outside the {self.chart_id} chart domain")
        return u

    def _require_x(self, x) -> np.ndarray:
        x = _as_points(x)
        if not np.all(self._inside_x(x)):
            raise DomainError(f"Cartesian point outside the {self.chart_id} chart wedge")
        return x

    def __repr__(self) -> str:  # pragma: no cover
        return f"<Chart {self.chart_id}>"


class CartesianChart(Chart):
    chart_id = "cartesian"
    sample_box = ((-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0))

    def to_cartesian(self, u):
        return _as_points(u).copy()

    def from_cartesian(self, x):
        return _as_points(x).copy()

    def jac_forward(self, x):
        x = _as_points(x)
        return np.broadcast_to(np.eye(3), x.shape[:-1] + (3, 3)).copy()

    jac_inverse = jac_forward

    def metric(self, u):
        self._require_u(u)
        return ETA.copy()

    def metric_inv(self, u):
        self._require_u(u)
        return ETA.copy()

    def frame(self, u):
        self._require_u(u)
        return np.eye(3)

    def frame_deriv(self, u):
        self._require_u(u)
        return np.zeros((3, 3, 3))

    def christoffel(self, u):
        self._require_u(u)
        return np.zeros((3, 3, 3))


class PolarChart(Chart):
    """u = (x^0, r, phi) with the rotating orthonormal frame."""

    chart_id = "polar"
    # r bounded below by 0.8: keeps third derivatives of 1/r coefficients
    # small enough that h = 1e-3 curvature stencils sit well under 1e-5
    sample_box = ((-1.0, 1.0), (0.8, 3.0), (-2.5, 2.5))

    def _inside_u(self, u):
        return u[..., 1] >= self.delta

    def _inside_x(self, x):
        return np.hypot(x[..., 1], x[..., 2]) >= self.delta

    def to_cartesian(self, u):
        u = self._require_u(u)
        r, phi = u[..., 1], u[..., 2]
        return np.stack([u[..., 0], r * np.cos(phi), r * np.sin(phi)], axis=-1)

    def from_cartesian(self, x):
        x = self._require_x(x)
        r = np.hypot(x[..., 1], x[..., 2])
        phi = np.arctan2(x[..., 2], x[..., 1])
        return np.stack([x[..., 0], r, phi], axis=-1)

    def jac_forward(self, x):
        x = self._require_x(x)
        r = np.hypot(x[..., 1], x[..., 2])
        jac = np.zeros(x.shape[:-1] + (3, 3))
        jac[..., 0, 0] = 1.0
        jac[..., 1, 1] = x[..., 1] / r
        jac[..., 1, 2] = x[..., 2] / r
        jac[..., 2, 1] = -x[..., 2] / r ** 2
        jac[..., 2, 2] = x[..., 1] / r ** 2
        return jac

    def jac_inverse(self, u):
        u = self._require_u(u)
        r, phi = u[..., 1], u[..., 2]
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = 1.0
        jac[..., 1, 1] = np.cos(phi)
        jac[..., 1, 2] = -r * np.sin(phi)
        jac[..., 2, 1] = np.sin(phi)
        jac[..., 2, 2] = r * np.cos(phi)
        return jac

    def metric(self, u):
        u = self._require_u(u)
        return np.diag([1.0, -1.0, -float(u[1]) ** 2])

    def metric_inv(self, u):
        u = self._require_u(u)
        return np.diag([1.0, -1.0, -1.0 / float(u[1]) ** 2])

    def frame(self, u):
        u = self._require_u(u)
        return np.diag([1.0, 1.0, 1.0 / float(u[1])])

    def frame_deriv(self, u):
        u = self._require_u(u)
        d = np.zeros((3, 3, 3))
        d[1, 2, 2] = -1.0 / float(u[1]) ** 2
        return d

    def christoffel(self, u):
        u = self._require_u(u)
        r = float(u[1])
        g = np.zeros((3, 3, 3))
        g[1, 2, 2] = -r
        g[2, 1, 2] = g[2, 2, 1] = 1.0 / r
        return g


class RindlerTChart(Chart):
    """Wedge |x^0| > |x^2|; u = (proper distance, x^1, rapidity)."""

    chart_id = "rindler_t"
    sample_box = ((0.8, 3.0), (-1.0, 1.0), (-1.2, 1.2))

    def __init__(self, eps: int = 1):
        if eps not in (1, -1):
            raise DomainError(f"branch sign eps must be +1 or -1, got {eps!r}")
        self.eps = eps

    def _inside_u(self, u):
        return u[..., 0] >= self.delta

    def _inside_x(self, x):
        inside = np.abs(x[..., 0]) > np.abs(x[..., 2])
        inside &= np.sign(x[..., 0] + x[..., 2]) == self.eps
        inside &= np.sqrt(np.maximum(x[..., 0] ** 2 - x[..., 2] ** 2, 0.0)) >= self.delta
        return inside

    def to_cartesian(self, u):
        u = self._require_u(u)
        u0, u2 = u[..., 0], u[..., 2]
        return np.stack([self.eps * u0 * np.cosh(u2), u[..., 1],
                         self.eps * u0 * np.sinh(u2)], axis=-1)

    def from_cartesian(self, x):
        x = self._require_x(x)
        u0 = np.sqrt(x[..., 0] ** 2 - x[..., 2] ** 2)
        u2 = 0.5 * np.log((x[..., 0] + x[..., 2]) / (x[..., 0] - x[..., 2]))
        return np.stack([u0, x[..., 1], u2], axis=-1)

    def jac_forward(self, x):
        x = self._require_x(x)
        u0sq = x[..., 0] ** 2 - x[..., 2] ** 2
        u0 = np.sqrt(u0sq)
        jac = np.zeros(x.shape[:-1] + (3, 3))
        jac[..., 0, 0] = x[..., 0] / u0
        jac[..., 0, 2] = -x[..., 2] / u0
        jac[..., 1, 1] = 1.0
        jac[..., 2, 0] = -x[..., 2] / u0sq
        jac[..., 2, 2] = x[..., 0] / u0sq
        return jac

    def jac_inverse(self, u):
        u = self._require_u(u)
        u0, u2 = u[..., 0], u[..., 2]
        ch, sh = np.cosh(u2), np.sinh(u2)
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = self.eps * ch
        jac[..., 0, 2] = self.eps * u0 * sh
        jac[..., 1, 1] = 1.0
        jac[..., 2, 0] = self.eps * sh
        jac[..., 2, 2] = self.eps * u0 * ch
        return jac

    def metric(self, u):
        u = self._require_u(u)
        return np.diag([1.0, -1.0, -float(u[0]) ** 2])

    def metric_inv(self, u):
        u = self._require_u(u)
        return np.diag([1.0, -1.0, -1.0 / float(u[0]) ** 2])

    def frame(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        ch, sh = np.cosh(u2), np.sinh(u2)
        e = np.zeros((3, 3))
        e[0, 0] = self.eps * ch
        e[2, 0] = -self.eps * sh / u0
        e[1, 1] = 1.0
        e[0, 2] = -self.eps * sh
        e[2, 2] = self.eps * ch / u0
        return e

    def frame_deriv(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        ch, sh = np.cosh(u2), np.sinh(u2)
        d = np.zeros((3, 3, 3))
        d[0, 2, 0] = self.eps * sh / u0 ** 2
        d[0, 2, 2] = -self.eps * ch / u0 ** 2
        d[2, 0, 0] = self.eps * sh
        d[2, 2, 0] = -self.eps * ch / u0
        d[2, 0, 2] = -self.eps * ch
        d[2, 2, 2] = self.eps * sh / u0
        return d

    def christoffel(self, u):
        u = self._require_u(u)
        u0 = float(u[0])
        g = np.zeros((3, 3, 3))
        g[0, 2, 2] = u0
        g[2, 0, 2] = g[2, 2, 0] = 1.0 / u0
        return g


class RindlerXChart(Chart):
    """Wedge |x^0| < |x^2|; u = (proper distance, x^1, rapidity)."""

    chart_id = "rindler_x"
    sample_box = ((0.8, 3.0), (-1.0, 1.0), (-1.2, 1.2))

    def __init__(self, eps: int = 1):
        if eps not in (1, -1):
            raise DomainError(f"branch sign eps must be +1 or -1, got {eps!r}")
        self.eps = eps

    def _inside_u(self, u):
        return u[..., 0] >= self.delta

    def _inside_x(self, x):
        inside = np.abs(x[..., 2]) > np.abs(x[..., 0])
        inside &= np.sign(x[..., 2] + x[..., 0]) == self.eps
        inside &= np.sqrt(np.maximum(x[..., 2] ** 2 - x[..., 0] ** 2, 0.0)) >= self.delta
        return inside

    def to_cartesian(self, u):
        u = self._require_u(u)
        u0, u2 = u[..., 0], u[..., 2]
        return np.stack([self.eps * u0 * np.sinh(u2), u[..., 1],
                         self.eps * u0 * np.cosh(u2)], axis=-1)

    def from_cartesian(self, x):
        x = self._require_x(x)
        u0 = np.sqrt(x[..., 2] ** 2 - x[..., 0] ** 2)
        u2 = 0.5 * np.log((x[..., 2] + x[..., 0]) / (x[..., 2] - x[..., 0]))
        return np.stack([u0, x[..., 1], u2], axis=-1)

    def jac_forward(self, x):
        x = self._require_x(x)
        u0sq = x[..., 2] ** 2 - x[..., 0] ** 2
        u0 = np.sqrt(u0sq)
        jac = np.zeros(x.shape[:-1] + (3, 3))
        jac[..., 0, 0] = -x[..., 0] / u0
        jac[..., 0, 2] = x[..., 2] / u0
        jac[..., 1, 1] = 1.0
        jac[..., 2, 0] = x[..., 2] / u0sq
        jac[..., 2, 2] = -x[..., 0] / u0sq
        return jac

    def jac_inverse(self, u):
        u = self._require_u(u)
        u0, u2 = u[..., 0], u[..., 2]
        ch, sh = np.cosh(u2), np.sinh(u2)
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = self.eps * sh
        jac[..., 0, 2] = self.eps * u0 * ch
        jac[..., 1, 1] = 1.0
        jac[..., 2, 0] = self.eps * ch
        jac[..., 2, 2] = self.eps * u0 * sh
        return jac

    def metric(self, u):
        u = self._require_u(u)
        return np.diag([-1.0, -1.0, float(u[0]) ** 2])

    def metric_inv(self, u):
        u = self._require_u(u)
        return np.diag([-1.0, -1.0, 1.0 / float(u[0]) ** 2])

    def frame(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        ch, sh = np.cosh(u2), np.sinh(u2)
        e = np.zeros((3, 3))
        e[0, 0] = -self.eps * sh
        e[2, 0] = self.eps * ch / u0
        e[1, 1] = 1.0
        e[0, 2] = self.eps * ch
        e[2, 2] = -self.eps * sh / u0
        return e

    def frame_deriv(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        ch, sh = np.cosh(u2), np.sinh(u2)
        d = np.zeros((3, 3, 3))
        d[0, 2, 0] = -self.eps * ch / u0 ** 2
        d[0, 2, 2] = self.eps * sh / u0 ** 2
        d[2, 0, 0] = -self.eps * ch
        d[2, 2, 0] = self.eps * sh / u0
        d[2, 0, 2] = self.eps * sh
        d[2, 2, 2] = -self.eps * ch / u0
        return d

    def christoffel(self, u):
        u = self._require_u(u)
        u0 = float(u[0])
        g = np.zeros((3, 3, 3))
        g[0, 2, 2] = u0
        g[2, 0, 2] = g[2, 2, 0] = 1.0 / u0
        return g


class NullPlaneChart(Chart):
    """Light-cone coordinates u = (x^0 - x^2, x^1, x^0 + x^2)."""

    chart_id = "null_plane"
    sample_box = ((-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0))

    _METRIC = np.array([[0.0, 0.0, 0.5], [0.0, -1.0, 0.0], [0.5, 0.0, 0.0]])
    _METRIC_INV = np.array([[0.0, 0.0, 2.0], [0.0, -1.0, 0.0], [2.0, 0.0, 0.0]])
    _FRAME = np.array([[1.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
    _JF = np.array([[1.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
    _JI = np.array([[0.5, 0.0, 0.5], [0.0, 1.0, 0.0], [-0.5, 0.0, 0.5]])

    def to_cartesian(self, u):
        u = self._require_u(u)
        return np.einsum("am,...m->...a", self._JI, u)

    def from_cartesian(self, x):
        x = self._require_x(x)
        return np.einsum("ma,...a->...m", self._JF, x)

    def jac_forward(self, x):
        x = _as_points(x)
        return np.broadcast_to(self._JF, x.shape[:-1] + (3, 3)).copy()

    def jac_inverse(self, u):
        u = _as_points(u)
        return np.broadcast_to(self._JI, u.shape[:-1] + (3, 3)).copy()

    def metric(self, u):
        self._require_u(u)
        return self._METRIC.copy()

    def metric_inv(self, u):
        self._require_u(u)
        return self._METRIC_INV.copy()

    def frame(self, u):
        self._require_u(u)
        return self._FRAME.copy()

    def frame_deriv(self, u):
        self._require_u(u)
        return np.zeros((3, 3, 3))

    def christoffel(self, u):
        self._require_u(u)
        return np.zeros((3, 3, 3))


class NullParabolicChart(Chart):
    """Parabolic null coordinates with shape parameter ``a != 0``."""

    chart_id = "null_parabolic"
    sample_box = ((-2.0, 2.0), (-2.0, 2.0), (-1.5, 1.5))

    def __init__(self, a: float = 1.0):
        if abs(a) < 1e-3:
            raise DomainError(f"parameter a must satisfy |a| >= 1e-3, got {a!r}")
        self.a = float(a)

    def to_cartesian(self, u):
        u = self._require_u(u)
        a = self.a
        u0, u1, u2 = u[..., 0], u[..., 1], u[..., 2]
        # cubic coefficient is a/3 in both light-cone components, which is
        # what the roundtrip identity u0 = (x0-x2)^2/2 - 2a x1 forces
        common = 0.5 * u1 - u0 * u2 / (2.0 * a) + (a / 3.0) * u2 ** 3
        x0 = common + a * u2
        x1 = a * u2 ** 2 - u0 / (2.0 * a)
        x2 = common - a * u2
        return np.stack([x0, x1, x2], axis=-1)

    def from_cartesian(self, x):
        x = self._require_x(x)
        a = self.a
        w = x[..., 0] - x[..., 2]
        u0 = 0.5 * w ** 2 - 2.0 * a * x[..., 1]
        u1 = x[..., 0] + x[..., 2] + (w / a) * (w ** 2 / (6.0 * a) - x[..., 1])
        u2 = w / (2.0 * a)
        return np.stack([u0, u1, u2], axis=-1)

    def jac_forward(self, x):
        x = self._require_x(x)
        a = self.a
        w = x[..., 0] - x[..., 2]
        q = w ** 2 / (2.0 * a) - x[..., 1]
        jac = np.zeros(x.shape[:-1] + (3, 3))
        jac[..., 0, 0] = w
        jac[..., 0, 1] = -2.0 * a
        jac[..., 0, 2] = -w
        jac[..., 1, 0] = 1.0 + q / a
        jac[..., 1, 1] = -w / a
        jac[..., 1, 2] = 1.0 - q / a
        jac[..., 2, 0] = 1.0 / (2.0 * a)
        jac[..., 2, 2] = -1.0 / (2.0 * a)
        return jac

    def jac_inverse(self, u):
        u = self._require_u(u)
        a = self.a
        u0, u2 = u[..., 0], u[..., 2]
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = -u2 / (2.0 * a)
        jac[..., 0, 1] = 0.5
        jac[..., 0, 2] = -u0 / (2.0 * a) + a * u2 ** 2 + a
        jac[..., 1, 0] = -1.0 / (2.0 * a)
        jac[..., 1, 2] = 2.0 * a * u2
        jac[..., 2, 0] = -u2 / (2.0 * a)
        jac[..., 2, 1] = 0.5
        jac[..., 2, 2] = -u0 / (2.0 * a) + a * u2 ** 2 - a
        return jac

    def metric(self, u):
        u = self._require_u(u)
        a = self.a
        g = np.zeros((3, 3))
        g[0, 0] = -1.0 / (4.0 * a ** 2)
        g[1, 2] = g[2, 1] = a
        g[2, 2] = -2.0 * float(u[0])
        return g

    def metric_inv(self, u):
        u = self._require_u(u)
        a = self.a
        g = np.zeros((3, 3))
        g[0, 0] = -4.0 * a ** 2
        g[1, 1] = 2.0 * float(u[0]) / a ** 2
        g[1, 2] = g[2, 1] = 1.0 / a
        return g

    def frame(self, u):
        u = self._require_u(u)
        a = self.a
        u0, u2 = float(u[0]), float(u[2])
        e = np.zeros((3, 3))
        e[0, 0] = 2.0 * a * u2
        e[1, 0] = 1.0 + u0 / (2.0 * a ** 2) + u2 ** 2
        e[2, 0] = 1.0 / (2.0 * a)
        e[0, 1] = -2.0 * a
        e[1, 1] = -2.0 * u2
        e[0, 2] = -2.0 * a * u2
        e[1, 2] = 1.0 - u0 / (2.0 * a ** 2) - u2 ** 2
        e[2, 2] = -1.0 / (2.0 * a)
        return e

    def frame_deriv(self, u):
        u = self._require_u(u)
        a = self.a
        u2 = float(u[2])
        d = np.zeros((3, 3, 3))
        d[0, 1, 0] = 1.0 / (2.0 * a ** 2)
        d[0, 1, 2] = -1.0 / (2.0 * a ** 2)
        d[2, 0, 0] = 2.0 * a
        d[2, 1, 0] = 2.0 * u2
        d[2, 1, 1] = -2.0
        d[2, 0, 2] = -2.0 * a
        d[2, 1, 2] = -2.0 * u2
        return d

    def christoffel(self, u):
        self._require_u(u)
        a = self.a
        g = np.zeros((3, 3, 3))
        g[0, 2, 2] = -4.0 * a ** 2
        g[1, 2, 0] = g[1, 0, 2] = -1.0 / a
        return g


class NullProjectiveChart(Chart):
    """Null coordinates built on the projective ratio x^1 / (x^0 - x^2)."""

    chart_id = "null_projective"
    sample_box = ((0.8, 3.0), (-2.0, 2.0), (-1.2, 1.2))

    def _inside_u(self, u):
        return u[..., 0] >= self.delta

    def _inside_x(self, x):
        return x[..., 0] - x[..., 2] >= self.delta

    def to_cartesian(self, u):
        u = self._require_u(u)
        u0, u1, u2 = u[..., 0], u[..., 1], u[..., 2]
        x0 = 0.5 * (u0 + u1 + u0 * u2 ** 2)
        x1 = u0 * u2
        x2 = 0.5 * (-u0 + u1 + u0 * u2 ** 2)
        return np.stack([x0, x1, x2], axis=-1)

    def from_cartesian(self, x):
        x = self._require_x(x)
        w = x[..., 0] - x[..., 2]
        u1 = x[..., 0] + x[..., 2] - x[..., 1] ** 2 / w
        return np.stack([w, u1, x[..., 1] / w], axis=-1)

    def jac_forward(self, x):
        x = self._require_x(x)
        w = x[..., 0] - x[..., 2]
        q = x[..., 1] / w
        jac = np.zeros(x.shape[:-1] + (3, 3))
        jac[..., 0, 0] = 1.0
        jac[..., 0, 2] = -1.0
        jac[..., 1, 0] = 1.0 + q ** 2
        jac[..., 1, 1] = -2.0 * q
        jac[..., 1, 2] = 1.0 - q ** 2
        jac[..., 2, 0] = -q / w
        jac[..., 2, 1] = 1.0 / w
        jac[..., 2, 2] = q / w
        return jac

    def jac_inverse(self, u):
        u = self._require_u(u)
        u0, u2 = u[..., 0], u[..., 2]
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = 0.5 * (1.0 + u2 ** 2)
        jac[..., 0, 1] = 0.5
        jac[..., 0, 2] = u0 * u2
        jac[..., 1, 0] = u2
        jac[..., 1, 2] = u0
        jac[..., 2, 0] = 0.5 * (-1.0 + u2 ** 2)
        jac[..., 2, 1] = 0.5
        jac[..., 2, 2] = u0 * u2
        return jac

    def metric(self, u):
        u = self._require_u(u)
        g = np.zeros((3, 3))
        g[0, 1] = g[1, 0] = 0.5
        g[2, 2] = -float(u[0]) ** 2
        return g

    def metric_inv(self, u):
        u = self._require_u(u)
        g = np.zeros((3, 3))
        g[0, 1] = g[1, 0] = 2.0
        g[2, 2] = -1.0 / float(u[0]) ** 2
        return g

    def frame(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        e = np.zeros((3, 3))
        e[0, 0] = 1.0
        e[1, 0] = 1.0 + u2 ** 2
        e[2, 0] = -u2 / u0
        e[1, 1] = -2.0 * u2
        e[2, 1] = 1.0 / u0
        e[0, 2] = -1.0
        e[1, 2] = 1.0 - u2 ** 2
        e[2, 2] = u2 / u0
        return e

    def frame_deriv(self, u):
        u = self._require_u(u)
        u0, u2 = float(u[0]), float(u[2])
        d = np.zeros((3, 3, 3))
        d[0, 2, 0] = u2 / u0 ** 2
        d[0, 2, 1] = -1.0 / u0 ** 2
        d[0, 2, 2] = -u2 / u0 ** 2
        d[2, 1, 0] = 2.0 * u2
        d[2, 2, 0] = -1.0 / u0
        d[2, 1, 1] = -2.0
        d[2, 1, 2] = -2.0 * u2
        d[2, 2, 2] = 1.0 / u0
        return d

    def christoffel(self, u):
        u = self._require_u(u)
        u0 = float(u[0])
        g = np.zeros((3, 3, 3))
        g[1, 2, 2] = 2.0 * u0
        g[2, 2, 0] = g[2, 0, 2] = 1.0 / u0
        return g


CHART_IDS = ("cartesian", "polar", "rindler_t", "rindler_x", "null_plane",
             "null_parabolic", "null_projective")


def make_chart(chart_id: str, **params) -> Chart:
    """Instantiate a chart by its string id.

    ``rindler_t``/``rindler_x`` accept ``eps`` (+1 default) and
    ``null_parabolic`` accepts ``a`` (1.0 default).
    """
    registry: dict[str, Callable[..., Chart]] = {
        "cartesian": CartesianChart,
        "polar": PolarChart,
        "rindler_t": RindlerTChart,
        "rindler_x": RindlerXChart,
        "null_plane": NullPlaneChart,
        "null_parabolic": NullParabolicChart,
        "null_projective": NullProjectiveChart,
    }
    if chart_id not in registry:
        raise DomainError(f"unknown chart id {chart_id!r}; valid ids: {CHART_IDS}")
    return registry[chart_id](**params)


def all_charts(a: float = 1.0) -> list[Chart]:
    """One instance of every chart (default branch signs, given a)."""
    return [CartesianChart(), PolarChart(), RindlerTChart(), RindlerXChart(),
            NullPlaneChart(), NullParabolicChart(a=a), NullProjectiveChart()]


# ---------------------------------------------------------------------------
# derived geometry and oracles
# ---------------------------------------------------------------------------

def metric_pullback(chart: Chart, u) -> np.ndarray:
    """g_{mu nu}(u) recomputed as the pullback of diag(1,-1,-1) through x(u)."""
    jac = chart.jac_inverse(np.asarray(u, dtype=float))
    return jac.T @ ETA @ jac


def roundtrip_error(chart: Chart, u) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.max(np.abs(chart.from_cartesian(chart.to_cartesian(u)) - u)))


def christoffel_fd(chart: Chart, u, h: float = 1e-5) -> np.ndarray:
    """Finite-difference evaluation of the Levi-Civita connection from g."""
    u = np.asarray(u, dtype=float)
    dg = np.zeros((3, 3, 3))  # dg[al, be, nu] = d_al g_{be nu}
    for al in range(3):
        step = np.zeros(3)
        step[al] = h
        dg[al] = (chart.metric(u + step) - chart.metric(u - step)) / (2.0 * h)
    ginv = chart.metric_inv(u)
    gamma = np.zeros((3, 3, 3))
    for mu in range(3):
        for nu in range(3):
            for al in range(3):
                gamma[mu, nu, al] = 0.5 * np.sum(
                    ginv[mu] * (dg[al, :, nu] + dg[nu, :, al] - dg[:, nu, al]))
    return gamma


def riemann_fd(chart: Chart, u, h: float = 1e-3) -> np.ndarray:
    """Curvature tensor R^sigma_{alpha nu mu} by central differences.

    Uses the closed-form Christoffel symbols; every chart covers flat
    space, so the result is a pure truncation-error certificate.
    """
    u = np.asarray(u, dtype=float)
    for nu in range(3):
        for sign in (-1.0, 1.0):
            step = np.zeros(3)
            step[nu] = sign * h
            if not chart.contains(u + 2.0 * step):
                raise DomainError(
                    f"step h={h} too large for the domain margin at {u}")
    gam = chart.christoffel(u)
    dgam = np.zeros((3, 3, 3, 3))  # dgam[nu, sig, al, mu] = d_nu Gamma^sig_{al mu}
    for nu in range(3):
        step = np.zeros(3)
        step[nu] = h
        dgam[nu] = (chart.christoffel(u + step) - chart.christoffel(u - step)) / (2.0 * h)
    riem = np.zeros((3, 3, 3, 3))
    for sig in range(3):
        for al in range(3):
            for nu in range(3):
                for mu in range(3):
                    val = dgam[nu, sig, al, mu] - dgam[mu, sig, al, nu]
                    val += np.sum(gam[sig, :, nu] * gam[:, al, mu]) \
                        - np.sum(gam[sig, :, mu] * gam[:, al, nu])
                    riem[sig, al, nu, mu] = -val
    return riem


def metric_compat_fd(chart: Chart, u, h: float = 1e-5) -> float:
    """Max |g_{al be ; mu}| by finite differences (should vanish)."""
    u = np.asarray(u, dtype=float)
    gam = chart.christoffel(u)
    g = chart.metric(u)
    worst = 0.0
    for mu in range(3):
        step = np.zeros(3)
        step[mu] = h
        dg = (chart.metric(u + step) - chart.metric(u - step)) / (2.0 * h)
        cov = dg.copy()
        for al in range(3):
            for be in range(3):
                cov[al, be] -= np.sum(gam[:, mu, al] * g[:, be])
                cov[al, be] -= np.sum(gam[:, mu, be] * g[al, :])
        worst = max(worst, float(np.max(np.abs(cov))))
    return worst


def spinor_connection(chart: Chart, u, rep: GammaRep) -> np.ndarray:
    """Traceless connection matrices Gamma_nu(u), shape (3, 2, 2).

    Built from Gamma_nu = -(1/4) gamma^al_{;nu} gamma_al with the analytic
    frame derivative, so the result is exact up to rounding.
    """
    u = np.asarray(u, dtype=float)
    gammas = curved_gamma(rep, chart, u)
    g = chart.metric(u)
    gam = chart.christoffel(u)
    dframe = chart.frame_deriv(u)
    frame = chart.frame(u)
    gamma_low = np.einsum("ab,bij->aij", g, gammas)
    out = np.zeros((3, 2, 2), dtype=complex)
    for nu in range(3):
        # gamma^al_{;nu} = (d_nu e^al_a + Gamma^al_{nu be} e^be_a) ghat^a
        cov_frame = dframe[nu] + gam[:, nu, :] @ frame
        dgamma = np.einsum("mb,bij->mij", cov_frame, rep.gammas)
        out[nu] = -0.25 * np.einsum("aij,ajk->ik", dgamma, gamma_low)
    return out


def covariant_gamma_deriv_fd(chart: Chart, u, rep: GammaRep, h: float = 1e-5) -> np.ndarray:
    """gamma^mu_{;nu} with the coordinate derivative taken by differences."""
    u = np.asarray(u, dtype=float)
    gam = chart.christoffel(u)
    out = np.zeros((3, 3, 2, 2), dtype=complex)
    for nu in range(3):
        step = np.zeros(3)
        step[nu] = h
        dgam = (curved_gamma(rep, chart, u + step) - curved_gamma(rep, chart, u - step)) / (2.0 * h)
        gammas = curved_gamma(rep, chart, u)
        out[nu] = dgam + np.einsum("mb,bij->mij", gam[:, nu, :], gammas)
    return out


def spinor_compat_residual(chart: Chart, u, rep: GammaRep, h: float = 1e-5) -> float:
    """Max violation of gamma^mu_{;nu} = -[Gamma_nu, gamma^mu]."""
    conn = spinor_connection(chart, u, rep)
    cov = covariant_gamma_deriv_fd(chart, u, rep, h=h)
    gammas = curved_gamma(rep, chart, u)
    worst = 0.0
    for nu in range(3):
        for mu in range(3):
            dev = cov[nu, mu] + (conn[nu] @ gammas[mu] - gammas[mu] @ conn[nu])
            worst = max(worst, float(np.max(np.abs(dev))))
    return worst


def momentum_apply(chart: Chart, rep: GammaRep, potential, field, point,
                   h: float = 1e-4) -> np.ndarray:
    """Generalized momentum (P_nu psi)(u) = i(d_nu + Gamma_nu)psi - A_nu psi.

    ``potential`` is None (free case) or a callable returning the chart
    components ``A_nu(u)``; ``field`` maps chart points to 2-spinors.
    Returns an array of shape (3, 2).
    """
    u = np.asarray(point, dtype=float)
    conn = spinor_connection(chart, u, rep)
    psi = np.asarray(field(u), dtype=complex)
    a = np.zeros(3) if potential is None else np.asarray(potential(u))
    out = np.zeros((3,) + psi.shape, dtype=complex)
    for nu in range(3):
        step = np.zeros(3)
        step[nu] = h
        dpsi = (np.asarray(field(u + step), dtype=complex)
                - np.asarray(field(u - step), dtype=complex)) / (2.0 * h)
        out[nu] = 1j * (dpsi + conn[nu] @ psi) - a[nu] * psi
    return out
