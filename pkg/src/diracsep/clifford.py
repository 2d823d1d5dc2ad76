"""Complex 2x2 matrix algebra for the (2+1)-dimensional Dirac theory.

Provides the Pauli matrices, the two inequivalent frame gamma
representations labelled by a sign ``s`` in ``{+1, -1}``, expansion of an
arbitrary 2x2 matrix over the basis ``{I, gamma^mu}``, and the
three-index Levi-Civita symbol/tensor used throughout the chart
machinery.

Index conventions
-----------------
Greek indices run over 0..2 and label chart coordinates; Latin indices
label frame legs.  The frame metric is ``eta = diag(1, -1, -1)``.
Raising and lowering is always written out explicitly with the metric at
hand; nothing is raised implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CliffordError, DomainError, SingularFrameError

ID2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: Frame (Minkowski) metric of the (2+1) theory.
ETA = np.diag([1.0, -1.0, -1.0])


def _eps3() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for (i, j, k), v in {(0, 1, 2): 1.0, (1, 2, 0): 1.0, (2, 0, 1): 1.0,
                         (0, 2, 1): -1.0, (2, 1, 0): -1.0, (1, 0, 2): -1.0}.items():
        eps[i, j, k] = v
    return eps


#: Totally antisymmetric symbol with eps[0,1,2] = +1 (all indices down).
EPS3 = _eps3()

for _m in (ID2, SIGMA1, SIGMA2, SIGMA3, ETA, EPS3):
    _m.setflags(write=False)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().swapaxes(-1, -2)


@dataclass(frozen=True)
class GammaRep:
    """Frame gamma matrices ``ghat^a`` for one of the two sign choices.

    The matrices satisfy ``ghat^a ghat^b + ghat^b ghat^a = 2 eta^{ab} I``
    and are all traceless.
    """

    s: int
    g0: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    id: np.ndarray = field(default_factory=lambda: ID2.copy())

    @property
    def gammas(self) -> np.ndarray:
        """Stacked frame matrices, shape (3, 2, 2)."""
        return np.stack([self.g0, self.g1, self.g2])

    def gamma(self, a: int) -> np.ndarray:
        return self.gammas[a]


def make_gamma_rep(s: int) -> GammaRep:
    """Build the frame gamma representation for sign ``s``.

    ``g0 = sigma3`` and ``g1 = i*s*sigma1``.  The third matrix carries a
    factor of i on sigma2 so that ``g2 @ g2 = -I``, which the
    anticommutation relations with ``eta = diag(1, -1, -1)`` require
    (a bare sigma2 squares to +I and cannot close the algebra).
    """
    if s not in (1, -1):
        raise DomainError(f"sign s must be +1 or -1, got {s!r}")
    return GammaRep(s=s, g0=SIGMA3.copy(), g1=1j * s * SIGMA1.copy(), g2=1j * SIGMA2.copy())


def curved_gamma(rep: GammaRep, chart, point: np.ndarray) -> np.ndarray:
    """Chart gamma matrices ``gamma^mu(u) = e^mu_a(u) ghat^a``, shape (3, 2, 2)."""
    frame = chart.frame(np.asarray(point, dtype=float))
    return np.einsum("ma,aij->mij", frame, rep.gammas)


def clifford_residual(gammas: np.ndarray, metric_inv: np.ndarray) -> float:
    """Worst entrywise violation of the anticommutation relations."""
    worst = 0.0
    for a in range(3):
        for b in range(3):
            dev = anticommutator(gammas[a], gammas[b]) - 2.0 * metric_inv[a, b] * ID2
            worst = max(worst, float(np.max(np.abs(dev))))
    return worst


def expand_in_basis(mat: np.ndarray, gammas: np.ndarray,
                    metric: np.ndarray | None = None,
                    tol: float = 1e-9) -> tuple[complex, np.ndarray]:
    """Expand ``mat = c*I + c_mu gamma^mu`` over the given gamma triple.

    ``metric`` is the covariant metric ``g_{mu nu}`` at the point the
    gammas were evaluated at (defaults to the frame metric).  Returns the
    scalar coefficient and the covariant vector ``c_mu``.
    """
    metric = ETA if metric is None else np.asarray(metric, dtype=float)
    metric_inv = np.linalg.inv(metric)
    if clifford_residual(gammas, metric_inv) > tol:
        raise CliffordError("gamma matrices do not satisfy the Clifford relation "
                            "for the supplied metric")
    c = complex(np.trace(mat)) / 2.0
    traces = np.array([np.trace(mat @ gammas[mu]) for mu in range(3)])
    c_mu = 0.5 * metric @ traces
    return c, c_mu


def reconstruct_from_basis(c: complex, c_mu: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Inverse of :func:`expand_in_basis`."""
    return c * ID2 + np.einsum("m,mij->ij", c_mu, gammas)


def levi_civita_tensor(chart, point: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Covariant Levi-Civita tensor ``e_{mu nu al} = det(e^a_mu) eps_{mu nu al}``."""
    coframe = chart.coframe(np.asarray(point, dtype=float))
    det = float(np.linalg.det(coframe))
    if abs(det) < tol:
        raise SingularFrameError(f"frame determinant {det} vanishes at {point}")
    return det * EPS3


def raise_levi_civita(tensor: np.ndarray, metric_inv: np.ndarray) -> np.ndarray:
    """All-indices-up version ``e^{mu nu al}`` of a covariant 3-tensor."""
    return np.einsum("ma,nb,lc,abc->mnl", metric_inv, metric_inv, metric_inv, tensor)


def mat_exp2(mat: np.ndarray) -> np.ndarray:
    """Closed-form exponential of a single 2x2 complex matrix.

    Splits ``mat = t*I + B`` with B traceless; then ``B^2 = Delta^2 I``
    and ``exp = e^t (cosh(Delta) I + sinh(Delta)/Delta B)``.
    """
    t = np.trace(mat) / 2.0
    b = mat - t * ID2
    delta2 = complex(t * t - np.linalg.det(mat))
    delta = np.sqrt(delta2)
    if abs(delta) < 1e-8:
        # sinh(x)/x expanded to keep full precision through the limit
        sinc = 1.0 + delta2 / 6.0 + delta2 * delta2 / 120.0
        return np.exp(t) * (np.cosh(delta) * ID2 + sinc * b)
    return np.exp(t) * (np.cosh(delta) * ID2 + (np.sinh(delta) / delta) * b)


def exp_generator(generator: np.ndarray, theta: np.ndarray, square_sign: int) -> np.ndarray:
    """Exponential ``exp(theta * G)`` for a generator with known square.

    ``square_sign`` states ``G @ G = square_sign * I`` (+1, -1) or 0 for a
    nilpotent generator.  ``theta`` may be any broadcastable (complex)
    array; the result has shape ``theta.shape + (2, 2)``.
    """
    theta = np.asarray(theta, dtype=complex)
    th = theta[..., None, None]
    if square_sign == 0:
        return ID2 + th * generator
    if square_sign == 1:
        return np.cosh(th) * ID2 + np.sinh(th) * generator
    if square_sign == -1:
        return np.cos(th) * ID2 + np.sin(th) * generator
    raise ValueError(f"square_sign must be -1, 0, or +1, got {square_sign!r}")
