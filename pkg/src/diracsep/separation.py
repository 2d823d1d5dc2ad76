"""The seven complete operator sets and separation-of-variables data.

Each complete set pairs two commuting Killing fields with the chart that
straightens them both to coordinate directions, the class of admissible
electromagnetic potentials (chart components depending on the single
reduced variable only), the matrix phase appearing in the separable
ansatz, and the spin factor relating the chart-frame solution ``psi`` to
the Cartesian-frame solution ``phi_C = S psi``.

Set ids: ``"1" .. "7"``, with the boost set split into its two wedges
``"4a"`` (|x0| > |x2|) and ``"4b"`` (|x0| < |x2|).  Set ``"6"`` carries a
nonzero chart parameter ``a``; set ``"7"`` is its a = 0 companion on a
different chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .clifford import ID2, GammaRep, exp_generator, make_gamma_rep
from .errors import AdmissibilityError, DomainError
from .geometry import (Chart, CartesianChart, NullParabolicChart, NullPlaneChart,
                       NullProjectiveChart, PolarChart, RindlerTChart, RindlerXChart)
from .symmetry import KillingField, make_killing, translation

SET_IDS = ("1", "2", "3", "4a", "4b", "5", "6", "7")


# ---------------------------------------------------------------------------
# potential profiles: polynomial plus inverse powers, analytic derivative
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Scalar profile sum(coeff * t**power) with integer powers."""

    terms: tuple[tuple[int, float], ...] = ()

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for power, coeff in self.terms:
            out = out + coeff * t ** power
        return out

    def derivative(self) -> "Profile":
        return Profile(tuple((p - 1, p * c) for p, c in self.terms if p != 0))

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for _, c in self.terms)

    @property
    def has_pole(self) -> bool:
        return any(p < 0 and c != 0.0 for p, c in self.terms)

    @property
    def min_power(self) -> int:
        powers = [p for p, c in self.terms if c != 0.0]
        return min(powers) if powers else 0


def as_profile(spec) -> Profile:
    """Coerce ``None``, term lists, or Profile instances."""
    if spec is None:
        return Profile()
    if isinstance(spec, Profile):
        return spec
    return Profile(tuple((int(p), float(c)) for p, c in spec))


# ---------------------------------------------------------------------------
# complete sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompleteSet:
    """All data of one complete set of commuting symmetry operators."""

    set_id: str
    chart: Chart
    killing_1: KillingField
    killing_2: KillingField
    ignorable: tuple[int, int]      # chart indices carrying the scalar phases
    reduced: int                    # chart index of the ODE variable
    phi_components: tuple[int, int]  # chart potential component equal to phi_j
    matrix_phase_kind: str | None   # None, "boost" (ghat^1) or "null" (ghat^0-ghat^2)
    prefactor_power: float          # reduced variable power multiplying the ansatz
    reduced_positive: bool          # chart domain bounds the reduced variable > 0
    cartesian_box: tuple[tuple[float, float], ...]

    @property
    def a(self) -> float | None:
        return getattr(self.chart, "a", None)

    def reduced_of_cartesian(self, x) -> np.ndarray:
        return self.chart.from_cartesian(np.asarray(x, dtype=float))[..., self.reduced]

    def sample_cartesian(self, n: int, seed: int = 0) -> np.ndarray:
        """n quasi-random Cartesian points inside the set's safe box."""
        rng = np.random.default_rng(seed)
        lo = np.array([b[0] for b in self.cartesian_box])
        hi = np.array([b[1] for b in self.cartesian_box])
        return lo + (hi - lo) * rng.random((n, 3))

    def reduced_range(self, pad: float = 0.05) -> tuple[float, float]:
        """Range of the reduced variable over the Cartesian box, padded."""
        grid = np.stack(np.meshgrid(*[np.linspace(lo, hi, 9) for lo, hi in
                                      self.cartesian_box], indexing="ij"), axis=-1)
        t = self.reduced_of_cartesian(grid.reshape(-1, 3))
        lo, hi = float(np.min(t)), float(np.max(t))
        span = hi - lo
        lo, hi = lo - pad * span, hi + pad * span
        if self.reduced_positive:
            lo = max(lo, self.chart.delta * 10.0)
        return lo, hi


def _rotation_21() -> KillingField:
    a = np.zeros((3, 3))
    a[1, 2], a[2, 1] = -0.5, 0.5
    return make_killing(a, np.zeros(3))


def _boost_02() -> KillingField:
    a = np.zeros((3, 3))
    a[0, 2], a[2, 0] = 0.5, -0.5
    return make_killing(a, np.zeros(3))


def _null_rotation(a_param: float) -> KillingField:
    a = np.zeros((3, 3))
    a[0, 1], a[1, 0] = 0.5, -0.5
    a[2, 1], a[1, 2] = 0.5, -0.5
    return make_killing(a, np.array([a_param, 0.0, -a_param]))


def _half_null_translation() -> KillingField:
    return make_killing(np.zeros((3, 3)), np.array([0.5, 0.0, 0.5]))


def get_set(set_id, a: float | None = None, eps: int = 1) -> CompleteSet:
    """Wire up a complete set by id.

    ``a`` is required (and nonzero) for set 6 and ignored elsewhere;
    ``eps`` picks the wedge branch for sets 4a/4b.
    """
    set_id = str(set_id)
    if set_id == "4":
        set_id = "4a"
    if set_id not in SET_IDS:
        raise DomainError(f"unknown set id {set_id!r}; valid ids: {SET_IDS}")
    if set_id == "6":
        if a is None or a == 0.0:
            raise DomainError("set 6 requires a nonzero chart parameter a")
    if set_id == "1":
        return CompleteSet(
            set_id="1", chart=CartesianChart(),
            killing_1=translation(0), killing_2=translation(1),
            ignorable=(0, 1), reduced=2, phi_components=(0, 1),
            matrix_phase_kind=None, prefactor_power=0.0, reduced_positive=False,
            cartesian_box=((0.2, 1.2), (0.2, 1.2), (0.2, 1.2)))
    if set_id == "2":
        return CompleteSet(
            set_id="2", chart=CartesianChart(),
            killing_1=translation(1), killing_2=translation(2),
            ignorable=(1, 2), reduced=0, phi_components=(1, 2),
            matrix_phase_kind=None, prefactor_power=0.0, reduced_positive=False,
            cartesian_box=((0.2, 1.2), (0.2, 1.2), (0.2, 1.2)))
    if set_id == "3":
        return CompleteSet(
            set_id="3", chart=PolarChart(),
            killing_1=translation(0), killing_2=_rotation_21(),
            ignorable=(0, 2), reduced=1, phi_components=(0, 2),
            matrix_phase_kind=None, prefactor_power=0.0, reduced_positive=True,
            cartesian_box=((0.2, 1.2), (1.0, 2.0), (0.5, 1.5)))
    if set_id == "4a":
        return CompleteSet(
            set_id="4a", chart=RindlerTChart(eps=eps),
            killing_1=translation(1), killing_2=_boost_02(),
            ignorable=(1, 2), reduced=0, phi_components=(1, 2),
            matrix_phase_kind="boost", prefactor_power=-0.5, reduced_positive=True,
            cartesian_box=((2.0, 3.0), (0.0, 1.0), (-0.45, 0.45)))
    if set_id == "4b":
        return CompleteSet(
            set_id="4b", chart=RindlerXChart(eps=eps),
            killing_1=translation(1), killing_2=_boost_02(),
            ignorable=(1, 2), reduced=0, phi_components=(1, 2),
            matrix_phase_kind="boost", prefactor_power=-0.5, reduced_positive=True,
            cartesian_box=((-0.45, 0.45), (0.0, 1.0), (2.0, 3.0)))
    if set_id == "5":
        return CompleteSet(
            set_id="5", chart=NullPlaneChart(),
            killing_1=translation(1), killing_2=_half_null_translation(),
            ignorable=(1, 2), reduced=0, phi_components=(1, 2),
            matrix_phase_kind=None, prefactor_power=0.0, reduced_positive=False,
            cartesian_box=((1.0, 2.0), (0.0, 1.0), (-0.45, 0.45)))
    if set_id == "6":
        # modest box: the cubic chart phase grows like (x0-x2)^3/a^2, and the
        # verification stencil needs its derivatives resolved at h ~ 1e-4
        return CompleteSet(
            set_id="6", chart=NullParabolicChart(a=float(a)),
            killing_1=_half_null_translation(), killing_2=_null_rotation(float(a)),
            ignorable=(1, 2), reduced=0, phi_components=(1, 2),
            matrix_phase_kind="null", prefactor_power=0.0, reduced_positive=False,
            cartesian_box=((1.5, 2.2), (0.0, 0.3), (0.0, 0.4)))
    # set 7
    return CompleteSet(
        set_id="7", chart=NullProjectiveChart(),
        killing_1=_half_null_translation(), killing_2=_null_rotation(0.0),
        ignorable=(1, 2), reduced=0, phi_components=(1, 2),
        matrix_phase_kind="null", prefactor_power=0.0, reduced_positive=True,
        cartesian_box=((2.0, 3.0), (0.0, 0.5), (0.0, 0.5)))


# ---------------------------------------------------------------------------
# admissible potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PotentialField:
    """Electromagnetic potential admissible for one complete set.

    The chart components A_nu(u) are three profiles of the reduced
    variable alone; the Cartesian components follow by the covector
    transformation A_{(C)al}(x) = A_nu(u(x)) du^nu/dx^al.
    """

    cset: CompleteSet
    profiles: tuple[Profile, Profile, Profile]

    def chart_components(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        t = u[..., self.cset.reduced]
        return np.stack([p(t) for p in self.profiles], axis=-1)

    def cartesian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        jac = self.cset.chart.jac_forward(x)
        u = self.cset.chart.from_cartesian(x)
        return np.einsum("...n,...na->...a", self.chart_components(u), jac)

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.profiles)


def make_potential(cset: CompleteSet, profiles: Sequence) -> PotentialField:
    """Validate and build a PotentialField from three profile term lists."""
    prof = tuple(as_profile(p) for p in profiles)
    if len(prof) != 3:
        raise AdmissibilityError("exactly three profiles (A_0, A_1, A_2) required")
    if any(p.has_pole for p in prof) and not cset.reduced_positive:
        raise AdmissibilityError(
            f"inverse powers are not admissible for set {cset.set_id}: the reduced "
            "variable is not bounded away from 0 by the chart domain")
    return PotentialField(cset=cset, profiles=prof)


def zero_potential(cset: CompleteSet) -> PotentialField:
    return make_potential(cset, (None, None, None))


# ---------------------------------------------------------------------------
# spin factor and ansatz
# ---------------------------------------------------------------------------

def matrix_phase(cset: CompleteSet, s: int, rep: GammaRep | None = None
                 ) -> tuple[np.ndarray, complex, int] | None:
    """Generator data (M, c, square_sign) of the ansatz factor exp(-i c M u2).

    Returns None for sets whose ansatz carries scalar phases only.  The
    coefficient is c = s/2 for every set that has a matrix phase.
    """
    if cset.matrix_phase_kind is None:
        return None
    rep = rep or make_gamma_rep(s)
    if cset.matrix_phase_kind == "boost":
        return rep.g1, 0.5 * s, -1
    if cset.matrix_phase_kind == "null":
        return rep.g0 - rep.g2, 0.5 * s, 0
    raise ValueError(f"unknown matrix phase kind {cset.matrix_phase_kind!r}")


def matrix_phase_values(cset: CompleteSet, u2, s: int,
                        rep: GammaRep | None = None) -> np.ndarray:
    """exp(-i c M u2) evaluated on an array of u2 values, shape (..., 2, 2)."""
    data = matrix_phase(cset, s, rep)
    if data is None:
        u2 = np.asarray(u2)
        return np.broadcast_to(ID2, u2.shape + (2, 2)).copy()
    gen, coeff, square = data
    theta = -1j * coeff * np.asarray(u2, dtype=complex)
    return exp_generator(gen, theta, square)


def spin_factor(cset: CompleteSet, u, s: int, rep: GammaRep | None = None) -> np.ndarray:
    """Spin factor S(u) with phi_C = S psi, shape (..., 2, 2).

    Identity except for set 3, whose rotating polar frame needs the local
    rotation exp(-i (s phi / 2) ghat^0) to reach the Cartesian frame.
    """
    u = np.asarray(u, dtype=float)
    if cset.set_id != "3":
        return np.broadcast_to(ID2, u.shape[:-1] + (2, 2)).copy()
    rep = rep or make_gamma_rep(s)
    theta = -0.5j * s * u[..., 2].astype(complex)
    return exp_generator(rep.g0, theta, 1)


@dataclass(frozen=True)
class SpinorField:
    """A separable solution, evaluable in chart or Cartesian coordinates.

    ``psi_tilde`` maps reduced-variable values to 2-spinors.  Provenance
    (set, separation constants, mass, sign, potential) rides along so the
    verification layer can rebuild the operators that created the field.
    """

    cset: CompleteSet
    lam1: float
    lam2: float
    s: int
    m: float
    psi_tilde: Callable[[np.ndarray], np.ndarray]
    potential: PotentialField | None = None

    @property
    def rep(self) -> GammaRep:
        return make_gamma_rep(self.s)

    def chart_eval(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        t = u[..., self.cset.reduced]
        val = np.asarray(self.psi_tilde(t), dtype=complex)
        phase = np.exp(-1j * (self.lam1 * u[..., self.cset.ignorable[0]]
                              + self.lam2 * u[..., self.cset.ignorable[1]]))
        if self.cset.matrix_phase_kind is not None:
            k = matrix_phase_values(self.cset, u[..., 2], self.s)
            val = np.einsum("...ij,...j->...i", k, val)
        if self.cset.prefactor_power != 0.0:
            val = (t ** self.cset.prefactor_power)[..., None] * val
        return phase[..., None] * val

    def cartesian_eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.cset.chart.from_cartesian(x)
        psi = self.chart_eval(u)
        if self.cset.set_id != "3":
            return psi
        fac = spin_factor(self.cset, u, self.s)
        return np.einsum("...ij,...j->...i", fac, psi)

    __call__ = cartesian_eval


def separable_ansatz(cset: CompleteSet, lam1: float, lam2: float, s: int, m: float,
                     psi_tilde: Callable[[np.ndarray], np.ndarray],
                     potential: PotentialField | None = None) -> SpinorField:
    """Assemble the separable solution for arbitrary reduced-variable data."""
    if s not in (1, -1):
        raise DomainError(f"sign s must be +1 or -1, got {s!r}")
    return SpinorField(cset=cset, lam1=float(lam1), lam2=float(lam2), s=s,
                       m=float(m), psi_tilde=psi_tilde, potential=potential)


# ---------------------------------------------------------------------------
# literal Cartesian potential formulas (oracle targets for reconciliation)
# ---------------------------------------------------------------------------

def cartesian_components_printed(potential: PotentialField, x) -> np.ndarray:
    """Per-set closed-form Cartesian components, transcribed verbatim.

    These duplicate what :meth:`PotentialField.cartesian` computes through
    the chart Jacobian and exist so the cross-check is an independent
    oracle.  For set 7 the transcription deliberately preserves the
    swapped 1 <-> 2 components of the source material; the reconciliation
    report documents the mismatch.
    """
    cset = potential.cset
    x = np.asarray(x, dtype=float)
    u = cset.chart.from_cartesian(x)
    a0, a1, a2 = (potential.profiles[k](u[..., cset.reduced]) for k in range(3))
    sid = cset.set_id
    if sid in ("1", "2"):
        return np.stack([a0, a1, a2], axis=-1)
    if sid == "3":
        r = u[..., 1]
        c0 = a0
        c1 = (x[..., 1] / r) * a1 - (x[..., 2] / r ** 2) * a2
        c2 = (x[..., 2] / r) * a1 + (x[..., 1] / r ** 2) * a2
        return np.stack([c0, c1, c2], axis=-1)
    if sid == "4a":
        u0 = u[..., 0]
        c0 = (x[..., 0] / u0) * a0 - (x[..., 2] / u0 ** 2) * a2
        c2 = -(x[..., 2] / u0) * a0 + (x[..., 0] / u0 ** 2) * a2
        return np.stack([c0, a1, c2], axis=-1)
    if sid == "4b":
        u0 = u[..., 0]
        c0 = -(x[..., 0] / u0) * a0 + (x[..., 2] / u0 ** 2) * a2
        c2 = (x[..., 2] / u0) * a0 - (x[..., 0] / u0 ** 2) * a2
        return np.stack([c0, a1, c2], axis=-1)
    if sid == "5":
        return np.stack([a0 + a2, a1, -a0 + a2], axis=-1)
    if sid == "6":
        a = cset.a
        w = x[..., 0] - x[..., 2]
        c0 = w * a0 + (1.0 - x[..., 1] / a + w ** 2 / (2 * a ** 2)) * a1 + a2 / (2 * a)
        c1 = -2.0 * a * a0 - (w / a) * a1
        c2 = -w * a0 + (1.0 + x[..., 1] / a - w ** 2 / (2 * a ** 2)) * a1 - a2 / (2 * a)
        return np.stack([c0, c1, c2], axis=-1)
    # set 7, verbatim: components 1 and 2 appear swapped relative to the
    # covector transformation (documented erratum)
    w = x[..., 0] - x[..., 2]
    q = x[..., 1] / w
    c0 = a0 + (1.0 + q ** 2) * a1 - (x[..., 1] / w ** 2) * a2
    c1 = -a0 + (1.0 - q ** 2) * a1 + (x[..., 1] / w ** 2) * a2
    c2 = -2.0 * q * a1 + a2 / w
    return np.stack([c0, c1, c2], axis=-1)
