"""Bosonic twirling at the covariance-matrix level.

Synchronised phase-space rotations R_theta (+) R_{s*theta} with s = +1
(correlated) or s = -1 (anticorrelated) act on a two-mode CM by congruence.
Averaging over theta is done analytically: under the correlated twirl each
2x2 block keeps only its rotation-commuting part [[m, t], [-t, m]]; under
the anticorrelated twirl the diagonal blocks project the same way while
the cross block keeps its symmetric-traceless part [[z, x], [x, -z]]
(EPR cross blocks mu' Z are of this form, which is why EPR states are
exact fixed points of the anticorrelated twirl).

Correlated-twirl fixed points are the quasi-normal forms with blocks
alpha I, beta I and [[w, phi], [-phi, w]]; whenever such a form is a
bona-fide CM it describes a separable state, which
`invariant_separability_check` verifies executably.  A single-mode
squeezer S_r = diag(r, 1/r) applied to both modes changes the trace of
any rotation-balanced CM, the kernel of the argument that no entangled
Gaussian state survives a U x U twirl over all Gaussian unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NotInvariantError
from .gaussian import (
    TwoModeCM,
    apply_symplectic,
    pts_eigenvalue,
    rotation_matrix,
)


class TwirlSign(Enum):
    CORRELATED = +1
    ANTICORRELATED = -1


@dataclass(frozen=True)
class RotationPair:
    theta: float
    sign: TwirlSign = TwirlSign.CORRELATED

    @property
    def matrix(self) -> np.ndarray:
        r1 = rotation_matrix(self.theta)
        r2 = rotation_matrix(self.sign.value * self.theta)
        out = np.zeros((4, 4))
        out[:2, :2] = r1
        out[2:, 2:] = r2
        return out


def rotate_cm(cm: TwoModeCM, pair: RotationPair) -> TwoModeCM:
    return apply_symplectic(cm, pair.matrix)


def _commuting_part(m: np.ndarray) -> np.ndarray:
    avg = 0.5 * (m[0, 0] + m[1, 1])
    skew = 0.5 * (m[0, 1] - m[1, 0])
    return np.array([[avg, skew], [-skew, avg]])


def _sym_traceless_part(m: np.ndarray) -> np.ndarray:
    z = 0.5 * (m[0, 0] - m[1, 1])
    x = 0.5 * (m[0, 1] + m[1, 0])
    return np.array([[z, x], [x, -z]])


def twirl_cm(cm: TwoModeCM, sign: TwirlSign) -> TwoModeCM:
    """Analytic average of the CM over theta in [0, 2pi).

    Exact block projection (no quadrature); output is the fixed point of
    `rotate_cm` at every angle, and twirling twice equals twirling once.
    """
    a = _commuting_part(cm.a_block)
    b = _commuting_part(cm.b_block)
    if sign is TwirlSign.CORRELATED:
        c = _commuting_part(cm.c_block)
    else:
        c = _sym_traceless_part(cm.c_block)
    return TwoModeCM(a, b, c)


def quasi_normal_cm(alpha: float, beta: float, w: float, phi: float) -> TwoModeCM:
    """Correlated-twirl fixed-point form: alpha I, beta I, [[w, phi], [-phi, w]]."""
    return TwoModeCM(
        alpha * np.eye(2), beta * np.eye(2),
        np.array([[w, phi], [-phi, w]]),
    )


def is_rotation_invariant(cm: TwoModeCM, sign: TwirlSign,
                          n_angles: int = 8, atol: float = 1e-10) -> bool:
    ref = cm.matrix
    for k in range(n_angles):
        theta = 2.0 * math.pi * (k + 0.37) / n_angles
        rotated = rotate_cm(cm, RotationPair(theta, sign))
        if np.max(np.abs(rotated.matrix - ref)) > atol:
            return False
    return True


def invariant_separability_check(cm: TwoModeCM) -> float:
    """PTS eigenvalue of a correlated-twirl-invariant CM; always >= 1.

    Raises NotInvariantError when the input is not actually invariant
    under correlated rotations (sampled at 8 angles).
    """
    if not is_rotation_invariant(cm, TwirlSign.CORRELATED):
        raise NotInvariantError("CM is not invariant under correlated rotations")
    eps = pts_eigenvalue(cm)
    assert eps >= 1.0 - 1e-9, f"invariant CM came out entangled: eps = {eps}"
    return eps


@dataclass(frozen=True)
class TraceRecord:
    trace_before: float
    trace_after: float

    @property
    def changed(self) -> bool:
        return not math.isclose(self.trace_before, self.trace_after,
                                rel_tol=1e-12, abs_tol=1e-12)


def squeezing_changes_trace(cm: TwoModeCM, r: float) -> TraceRecord:
    """Trace of V before/after the two-mode squeezer S_r (+) S_r, r >= 1."""
    if r < 1.0:
        raise DomainError(f"squeezing parameter must satisfy r >= 1, got {r}")
    s1 = np.diag([r, 1.0 / r])
    s = np.zeros((4, 4))
    s[:2, :2] = s1
    s[2:, 2:] = s1
    out = apply_symplectic(cm, s)
    return TraceRecord(float(np.trace(cm.matrix)), float(np.trace(out.matrix)))


def cv_werner_threshold(nbar: float) -> float:
    """Entanglement threshold p(nbar) = 1/(1 + 2 coth(2 arcsinh sqrt(nbar))).

    Mixing an EPR state (weight p) with the matching thermal product state
    yields an entangled state iff p exceeds this value; the limit for
    large nbar is 1/3 and the nbar -> 0 limit is 0.
    """
    if nbar < 0.0:
        raise DomainError(f"mean photon number must be >= 0, got {nbar}")
    if nbar == 0.0:
        return 0.0
    coth = 1.0 / math.tanh(2.0 * math.asinh(math.sqrt(nbar)))
    return 1.0 / (1.0 + 2.0 * coth)
