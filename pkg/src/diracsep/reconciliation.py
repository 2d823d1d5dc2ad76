"""Oracle-driven resolution of ambiguous chart and operator formulas.

Several closed-form ingredients of the chart catalog circulate in two
variants (sign, index placement, or coefficient).  Rather than trusting a
transcription, each entry here encodes both candidates and lets an
independent numerical oracle pick: roundtrip identities for coordinate
maps, the Minkowski pullback for metrics, the gradient equation for
scalar parts, and commutator/eigen residuals for operator coefficients.

``run_all`` executes every oracle and returns the resolutions;
``render_report`` formats them for the geometry-check command.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import ETA, SIGMA1, SIGMA2, SIGMA3, make_gamma_rep
from .geometry import NullParabolicChart, NullPlaneChart, NullProjectiveChart
from .separation import (cartesian_components_printed, get_set, make_potential,
                         separable_ansatz)
from .symmetry import (SymmetryOperator, build_operator_pair, commutator_residual,
                       check_determining, gaussian_test_spinor, phi_vector)


@dataclass(frozen=True)
class Resolution:
    key: str
    topic: str
    variant_a: str
    variant_b: str
    oracle: str
    chosen: str
    evidence: dict[str, float]

    def render(self) -> str:
        ev = ", ".join(f"{k}={v:.3e}" for k, v in self.evidence.items())
        return (f"[{self.key}] {self.topic}\n"
                f"  A: {self.variant_a}\n"
                f"  B: {self.variant_b}\n"
                f"  oracle: {self.oracle}\n"
                f"  resolved: {self.chosen}   ({ev})")


def _clifford_worst(g0, g1, g2) -> float:
    gam = [g0, g1, g2]
    eta_up = np.linalg.inv(ETA)
    worst = 0.0
    for a in range(3):
        for b in range(3):
            dev = gam[a] @ gam[b] + gam[b] @ gam[a] - 2.0 * eta_up[a, b] * np.eye(2)
            worst = max(worst, float(np.max(np.abs(dev))))
    return worst


def resolve_gamma_g2() -> Resolution:
    res_a = max(_clifford_worst(SIGMA3, 1j * s * SIGMA1, SIGMA2) for s in (1, -1))
    res_b = max(_clifford_worst(SIGMA3, 1j * s * SIGMA1, 1j * SIGMA2) for s in (1, -1))
    return Resolution(
        key="gamma-frame-g2",
        topic="third frame gamma matrix",
        variant_a="g2 = sigma2",
        variant_b="g2 = i*sigma2",
        oracle="anticommutator relations with eta = diag(1,-1,-1), both signs s",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_null_plane_metric() -> Resolution:
    chart = NullPlaneChart()
    printed_swap = np.array([[0.0, 0.0, 2.0], [0.0, -1.0, 0.0], [2.0, 0.0, 0.0]])
    jac = chart._JI
    pullback = jac.T @ ETA @ jac
    res_a = float(np.max(np.abs(printed_swap - pullback)))
    res_b = float(np.max(np.abs(chart._METRIC - pullback)))
    return Resolution(
        key="null-plane-metric-orientation",
        topic="covariant metric of the light-cone chart",
        variant_a="g_munu carries the off-diagonal 2 (and g^munu the 1/2)",
        variant_b="g_munu carries the off-diagonal 1/2 (and g^munu the 2)",
        oracle="pullback of diag(1,-1,-1) through the inverse map",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def _roundtrip_worst(forward, inverse, samples_u) -> float:
    worst = 0.0
    for u in samples_u:
        worst = max(worst, float(np.max(np.abs(forward(inverse(u)) - u))))
    return worst


def resolve_parabolic_inverse_cubic() -> Resolution:
    a = 0.7
    chart = NullParabolicChart(a=a)

    def inverse_variant(u, cubic_coeff):
        u0, u1, u2 = u
        common = 0.5 * u1 - u0 * u2 / (2 * a) + cubic_coeff * u2 ** 3
        return np.array([common + a * u2, a * u2 ** 2 - u0 / (2 * a),
                         0.5 * u1 - u0 * u2 / (2 * a) + cubic_coeff * u2 ** 3 - a * u2])

    # variant A: x0 keeps a/3 but x2 uses 1/3; variant B: both use a/3
    def inv_a(u):
        x = inverse_variant(u, a / 3.0)
        u0, u1, u2 = u
        x[2] = 0.5 * u1 - u0 * u2 / (2 * a) + (1.0 / 3.0) * u2 ** 3 - a * u2
        return x

    def inv_b(u):
        return inverse_variant(u, a / 3.0)

    rng = np.random.default_rng(3)
    samples = rng.uniform(-1.5, 1.5, size=(12, 3))
    res_a = _roundtrip_worst(chart.from_cartesian, inv_a, samples)
    res_b = _roundtrip_worst(chart.from_cartesian, inv_b, samples)
    return Resolution(
        key="parabolic-inverse-x2-cubic",
        topic="cubic coefficient in the parabolic chart's x^2(u)",
        variant_a="x^2 cubic term (1/3) u2^3",
        variant_b="x^2 cubic term (a/3) u2^3",
        oracle="roundtrip u -> x(u) -> u(x) on random samples",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_projective_forward_denominator() -> Resolution:
    chart = NullProjectiveChart()

    def forward_variant(x, use_x1):
        w = x[0] - x[2]
        den = (x[0] - x[1]) if use_x1 else w
        return np.array([w, x[0] + x[2] - x[1] ** 2 / den, x[1] / w])

    rng = np.random.default_rng(4)
    samples_u = np.column_stack([rng.uniform(0.5, 2.5, 12),
                                 rng.uniform(-1.5, 1.5, 12),
                                 rng.uniform(-1.0, 1.0, 12)])
    res_a = _roundtrip_worst(lambda x: forward_variant(x, True), chart.to_cartesian, samples_u)
    res_b = _roundtrip_worst(lambda x: forward_variant(x, False), chart.to_cartesian, samples_u)
    return Resolution(
        key="projective-forward-u1-denominator",
        topic="denominator in the projective chart's u1(x)",
        variant_a="u1 = x0 + x2 - (x1)^2/(x0 - x1)",
        variant_b="u1 = x0 + x2 - (x1)^2/(x0 - x2)",
        oracle="roundtrip x(u) -> u(x) against the inverse map",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_projective_inverse_x2() -> Resolution:
    chart = NullProjectiveChart()

    def inv_a(u):
        # collapsed reading: x2 set equal to x0
        u0, u1, u2 = u
        x0 = 0.5 * (u0 + u1 + u0 * u2 ** 2)
        return np.array([x0, u0 * u2, x0])

    rng = np.random.default_rng(5)
    samples_u = np.column_stack([rng.uniform(0.5, 2.5, 12),
                                 rng.uniform(-1.5, 1.5, 12),
                                 rng.uniform(-1.0, 1.0, 12)])
    res_a = 0.0
    for u in samples_u:
        x = inv_a(u)
        w = x[0] - x[2]
        res_a = max(res_a, abs(w - u[0]))  # forward u0 = x0 - x2 must recover u0
    res_b = _roundtrip_worst(chart.from_cartesian, chart.to_cartesian, samples_u)
    return Resolution(
        key="projective-inverse-x2-line",
        topic="x^2(u) line of the projective chart's inverse map",
        variant_a="x2 = x0 (collapsed double equality)",
        variant_b="x2 = (1/2)(-u0 + u1 + u0 u2^2)",
        oracle="forward map must recover u0 = x0 - x2",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_set2_scalar_part() -> Resolution:
    cset = get_set(2)
    pot = make_potential(cset, ([(1, 0.4)], [(2, 0.3)], [(1, 0.6)]))
    _, x2 = build_operator_pair(cset, pot, s=1)
    pts = cset.sample_cartesian(40, seed=11)

    def with_component(comp):
        def phi(x, _c=comp):
            u = cset.chart.from_cartesian(np.asarray(x, float))
            return pot.profiles[_c](u[..., cset.reduced])
        return x2.with_phi(phi)

    res_a = check_determining(with_component(1), pot, pts).phi_gradient
    res_b = check_determining(with_component(2), pot, pts).phi_gradient
    return Resolution(
        key="set2-second-scalar-part",
        topic="scalar part of the second operator of set 2",
        variant_a="phi_2 = A_1",
        variant_b="phi_2 = A_2",
        oracle="finite-difference gradient equation d_mu phi = F_{mu nu} xi^nu",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_set7_operator_coefficient() -> Resolution:
    s = -1  # the two readings only differ for s = -1
    cset = get_set(7)
    pot = make_potential(cset, ([(1, 0.2)], [(1, 0.1)], [(1, 0.15)]))
    _, x2 = build_operator_pair(cset, pot, s=s)
    psi = gaussian_test_spinor(seed=21, center=(2.5, 0.25, 0.25), width=1.0)
    pts = cset.sample_cartesian(6, seed=22)

    doubled = SymmetryOperator(killing=x2.killing, phi=x2.phi,
                               phi_vec=s * x2.phi_vec, rep=x2.rep, label="X2*s")
    res_a = commutator_residual(doubled, pot, psi, pts, h=1e-3)
    res_b = commutator_residual(x2, pot, psi, pts, h=1e-3)
    return Resolution(
        key="set7-x2-operator-coefficient",
        topic="matrix-part coefficient of the second operator of set 7",
        variant_a="X2 = i d_u2 - (s/2)*s*gamma^0  (doubled sign factor)",
        variant_b="X2 = i d_u2 - (s/2) gamma^0",
        oracle="commutator residual [X2, H] psi at s = -1",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_set7_cartesian_block() -> Resolution:
    cset = get_set(7)
    pot = make_potential(cset, ([(1, 0.3)], [(2, 0.2)], [(1, 0.4)]))
    pts = cset.sample_cartesian(40, seed=13)
    printed = cartesian_components_printed(pot, pts)
    transformed = pot.cartesian(pts)
    res_a = float(np.max(np.abs(printed - transformed)))
    swapped = printed[:, [0, 2, 1]]
    res_b = float(np.max(np.abs(swapped - transformed)))
    return Resolution(
        key="set7-cartesian-potential-block",
        topic="closed-form Cartesian potential components of set 7",
        variant_a="block as transcribed (components 1 and 2 as listed)",
        variant_b="same block with components 1 and 2 interchanged",
        oracle="covector transformation A_(C)al = A_nu du^nu/dx^al",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def resolve_set6_first_generator() -> Resolution:
    a = 0.7
    cset = get_set(6, a=a)
    rng = np.random.default_rng(17)
    pts = cset.sample_cartesian(20, seed=17)
    jac = cset.chart.jac_forward(pts)

    def straightening(b_vec):
        xi = np.broadcast_to(b_vec, pts.shape)
        pushed = np.einsum("...ma,...a->...m", jac, xi)
        target = np.zeros(3)
        target[1] = 1.0
        return float(np.max(np.abs(pushed - target)))

    res_a = straightening(np.array([0.5, 0.5, 0.0]))   # (p0 + p1)/2
    res_b = straightening(np.array([0.5, 0.0, 0.5]))   # (p0 + p2)/2
    return Resolution(
        key="set6-first-generator",
        topic="first generator of sets 6 and 7",
        variant_a="(p0 + p1)/2",
        variant_b="(p0 + p2)/2",
        oracle="pushforward through the chart Jacobian must equal the u1 direction",
        chosen="B" if res_b < res_a else "A",
        evidence={"residual_a": res_a, "residual_b": res_b})


def run_all() -> list[Resolution]:
    return [
        resolve_gamma_g2(),
        resolve_null_plane_metric(),
        resolve_parabolic_inverse_cubic(),
        resolve_projective_forward_denominator(),
        resolve_projective_inverse_x2(),
        resolve_set2_scalar_part(),
        resolve_set7_operator_coefficient(),
        resolve_set7_cartesian_block(),
        resolve_set6_first_generator(),
    ]


def render_report(resolutions: list[Resolution] | None = None) -> str:
    resolutions = run_all() if resolutions is None else resolutions
    header = ("reconciliation report: candidate formula variants resolved by "
              "numerical oracles\n")
    return header + "\n".join(r.render() for r in resolutions) + "\n"
