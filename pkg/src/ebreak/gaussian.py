"""Covariance-matrix algebra for one- and two-mode Gaussian states.

Conventions: hbar = 2, so each vacuum quadrature has unit variance and a
single-mode thermal state has CM (2*nbar + 1) * I.  Quadratures are ordered
(qA, pA, qB, pB) and a two-mode CM is stored in the block form

    V = [[A, C], [C^T, B]]

with 2x2 blocks.  All entropic quantities are in bits (base-2 logs).

The closed forms used here are standard:

* symplectic spectrum   nu+- = sqrt[(D +- sqrt(D^2 - 4 detV)) / 2],
  D = detA + detB + 2 detC;
* smallest PT-symplectic eigenvalue eps: same formula with
  D~ = detA + detB - 2 detC (momentum flip on mode B);
* von Neumann entropy   S = sum_k h(nu_k) with
  h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2);
* purity = 1/sqrt(detV);  coherent information I(A>B) = h(nu_B) - S.

The minus branch of the spectrum is evaluated in the algebraically
equivalent conjugate form 2 detV / (D + sqrt(D^2 - 4 detV)), which stays
accurate when D is many orders of magnitude larger than nu-^2 (large
squeezing), where the textbook difference form loses all precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ComplexSpectrumError,
    DomainError,
    NonSymmetricError,
    NotSymplecticError,
)

SYMMETRY_TOL = 1e-12
#: smallest symplectic eigenvalue may undershoot 1 by this much and still
#: count as physical (boundary states classify as physical)
NU_MIN_TOL = 1e-9

I2 = np.eye(2)
Z2 = np.diag([1.0, -1.0])

#: symplectic form of a single mode / of two modes, [q, p] ordering
OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA2 = np.block([[OMEGA1, np.zeros((2, 2))], [np.zeros((2, 2)), OMEGA1]])

# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class TwoModeCM:
    """Two-mode covariance matrix in (A, B, C) block form.

    Blocks are defensively copied and frozen.  A and B must be symmetric;
    the full 4x4 matrix is symmetric by construction.
    """

    a_block: np.ndarray
    b_block: np.ndarray
    c_block: np.ndarray

    def __post_init__(self):
        for name in ("a_block", "b_block", "c_block"):
            blk = np.array(getattr(self, name), dtype=float)
            if blk.shape != (2, 2):
                raise NonSymmetricError(f"{name} must be 2x2, got {blk.shape}")
            blk.flags.writeable = False
            object.__setattr__(self, name, blk)
        for name in ("a_block", "b_block"):
            blk = getattr(self, name)
            if abs(blk[0, 1] - blk[1, 0]) > SYMMETRY_TOL:
                raise NonSymmetricError(
                    f"{name} off-diagonal mismatch {blk[0, 1] - blk[1, 0]:g}"
                )

    @classmethod
    def from_matrix(cls, matrix) -> "TwoModeCM":
        m = np.asarray(matrix, dtype=float)
        if m.shape != (4, 4):
            raise NonSymmetricError(f"expected a 4x4 matrix, got {m.shape}")
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
            raise NonSymmetricError("matrix is not symmetric within 1e-12")
        return cls(m[:2, :2], m[2:, 2:], m[:2, 2:])

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.a_block, self.c_block],
                         [self.c_block.T, self.b_block]])

    def allclose(self, other: "TwoModeCM", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class SymplecticSpectrum:
    nu_minus: float
    nu_plus: float

    def __iter__(self):
        return iter((self.nu_minus, self.nu_plus))


@dataclass(frozen=True)
class EntanglementReport:
    """PT-symplectic eigenvalue plus the derived entanglement quantifiers."""

    eps: float
    logneg: float
    coherent_info: float
    separable: bool
    distillable_one_way: bool


# ---------------------------------------------------------------------------
# constructors


def vacuum_cm() -> TwoModeCM:
    return TwoModeCM(I2, I2, np.zeros((2, 2)))


def thermal_cm(omega_a: float, omega_b: float) -> TwoModeCM:
    """Product of two thermal states with quadrature variances omega_a/b."""
    return TwoModeCM(omega_a * I2, omega_b * I2, np.zeros((2, 2)))


def epr_cm(mu: float) -> TwoModeCM:
    """Two-mode squeezed vacuum: diagonal blocks mu*I, off-blocks mu'*Z."""
    if mu < 1.0:
        raise DomainError(f"EPR variance must satisfy mu >= 1, got {mu}")
    mu_prime = math.sqrt(mu * mu - 1.0)
    return TwoModeCM(mu * I2, mu * I2, mu_prime * Z2)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def beam_splitter(tau: float) -> np.ndarray:
    """4x4 symplectic of a beam splitter with transmissivity tau.

    The environment port enters with +sqrt(1-tau) on the system row.
    """
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {tau}")
    t, r = math.sqrt(tau), math.sqrt(1.0 - tau)
    return np.block([[t * I2, r * I2], [-r * I2, t * I2]])


# ---------------------------------------------------------------------------
# entropy kernel


def mode_entropy(nu: float) -> float:
    """Entropy contribution h(nu) of one symplectic eigenvalue, in bits.

    h(1) = 0; values within NU_MIN_TOL below 1 are clamped to 1.  A series
    branch handles nu -> 1+ where the direct formula would evaluate
    0 * log(0).
    """
    if nu < 1.0 - NU_MIN_TOL:
        raise DomainError(f"symplectic eigenvalue below 1: {nu}")
    t = 0.5 * (nu - 1.0)
    if t <= 0.0:
        return 0.0
    if t < 1e-6:
        # (1+t)ln(1+t) - t ln t expanded around t = 0
        return (t * (1.0 - math.log(t)) + 0.5 * t * t - t ** 3 / 6.0) / math.log(2.0)
    u = 0.5 * (nu + 1.0)
    return u * math.log2(u) - t * math.log2(t)


def mode_entropy_asymptotic(nu: float) -> float:
    """Large-nu expansion h(nu) ~ log2(e*nu/2)."""
    return math.log2(0.5 * math.e * nu)


# ---------------------------------------------------------------------------
# spectra


def _spectrum_from_invariants(delta: float, det_v: float) -> tuple[float, float]:
    disc = delta * delta - 4.0 * det_v
    scale = max(1.0, delta * delta, 4.0 * abs(det_v))
    if disc < -1e-9 * scale:
        raise ComplexSpectrumError(
            f"Delta^2 < 4 detV (Delta={delta:g}, detV={det_v:g}): non-physical CM"
        )
    if disc < 1e-11 * scale:
        # degenerate spectrum within float noise (e.g. pure EPR states);
        # the raw discriminant would turn ~1e-14 noise into ~1e-7 on nu
        disc = 0.0
    root = math.sqrt(disc)
    hi = 0.5 * (delta + root)
    if hi <= 0.0:
        raise ComplexSpectrumError(f"non-positive spectrum (Delta={delta:g})")
    nu_plus = math.sqrt(hi)
    # conjugate form of (delta - root)/2, stable for delta >> nu_-^2
    nu_minus_sq = max(det_v, 0.0) / hi
    return math.sqrt(nu_minus_sq), nu_plus


def symplectic_spectrum(cm: TwoModeCM) -> SymplecticSpectrum:
    """Closed-form symplectic spectrum of a two-mode CM."""
    det_a = float(np.linalg.det(cm.a_block))
    det_b = float(np.linalg.det(cm.b_block))
    det_c = float(np.linalg.det(cm.c_block))
    det_v = float(np.linalg.det(cm.matrix))
    nu_minus, nu_plus = _spectrum_from_invariants(det_a + det_b + 2.0 * det_c, det_v)
    return SymplecticSpectrum(nu_minus, nu_plus)


def pts_eigenvalue(cm: TwoModeCM) -> float:
    """Smallest symplectic eigenvalue of the partially transposed CM.

    Partial transposition flips the momentum of mode B, which replaces
    detC by -detC in the spectral invariant while leaving detV unchanged.
    eps >= 1 iff the state is separable (two-mode Gaussian states).
    """
    det_a = float(np.linalg.det(cm.a_block))
    det_b = float(np.linalg.det(cm.b_block))
    det_c = float(np.linalg.det(cm.c_block))
    det_v = float(np.linalg.det(cm.matrix))
    eps, _ = _spectrum_from_invariants(det_a + det_b - 2.0 * det_c, det_v)
    return eps


def validate_cm(cm: TwoModeCM) -> bool:
    """Physicality check: V > 0 (leading principal minors) and nu- >= 1.

    Boundary states within NU_MIN_TOL of nu- = 1 count as physical.
    """
    m = cm.matrix
    for k in range(1, 5):
        if np.linalg.det(m[:k, :k]) <= 0.0:
            return False
    try:
        spec = symplectic_spectrum(cm)
    except ComplexSpectrumError:
        return False
    return spec.nu_minus >= 1.0 - NU_MIN_TOL


def von_neumann_entropy(spec: SymplecticSpectrum) -> float:
    """Total entropy S = h(nu-) + h(nu+) in bits."""
    return mode_entropy(spec.nu_minus) + mode_entropy(spec.nu_plus)


def cm_entropy(cm: TwoModeCM) -> float:
    return von_neumann_entropy(symplectic_spectrum(cm))


def purity(cm: TwoModeCM) -> float:
    """Tr rho^2 = 1/sqrt(detV); equals 1 iff the state is pure."""
    det_v = float(np.linalg.det(cm.matrix))
    if det_v <= 0.0:
        raise DomainError(f"detV must be positive, got {det_v:g}")
    return 1.0 / math.sqrt(det_v)


def coherent_information(cm: TwoModeCM) -> float:
    """I(A>B) = S(rho_B) - S(rho_AB) = h(nu_B) - h(nu-) - h(nu+), in ebits."""
    nu_b = math.sqrt(max(float(np.linalg.det(cm.b_block)), 0.0))
    return mode_entropy(nu_b) - cm_entropy(cm)


def coherent_information_asymptotic(cm: TwoModeCM) -> float:
    """Diverging-spectrum limit I(A>B) ~ log2[(2/e) sqrt(detB/detV)]."""
    det_b = float(np.linalg.det(cm.b_block))
    det_v = float(np.linalg.det(cm.matrix))
    return math.log2(2.0 / math.e) + 0.5 * math.log2(det_b / det_v)


def apply_symplectic(cm: TwoModeCM, s: np.ndarray) -> TwoModeCM:
    """Congruence V -> S V S^T for a Gaussian unitary with symplectic S."""
    s = np.asarray(s, dtype=float)
    if s.shape != (4, 4):
        raise NotSymplecticError(f"expected a 4x4 matrix, got {s.shape}")
    if np.max(np.abs(s @ OMEGA2 @ s.T - OMEGA2)) > 1e-10:
        raise NotSymplecticError("matrix does not preserve the symplectic form")
    out = s @ cm.matrix @ s.T
    out = 0.5 * (out + out.T)
    return TwoModeCM.from_matrix(out)


def entanglement_report(cm: TwoModeCM) -> EntanglementReport:
    """Entanglement summary of a (finite) two-mode Gaussian state.

    distillable_one_way follows the hashing bound: I(A>B) > 0.
    """
    eps = pts_eigenvalue(cm)
    return EntanglementReport(
        eps=eps,
        logneg=max(0.0, -math.log2(eps)),
        coherent_info=coherent_information(cm),
        separable=eps >= 1.0,
        distillable_one_way=coherent_information(cm) > 0.0,
    )


# ---------------------------------------------------------------------------
# text format: 4 rows x 4 whitespace-separated decimals, '#' comments


def parse_cm_text(text: str) -> TwoModeCM:
    rows = []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 4:
            raise NonSymmetricError(f"expected 4 values per row, got {len(parts)}")
        rows.append([float(p) for p in parts])
    if len(rows) != 4:
        raise NonSymmetricError(f"expected 4 data rows, got {len(rows)}")
    return TwoModeCM.from_matrix(np.array(rows))


def format_cm_text(cm: TwoModeCM, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    for row in cm.matrix:
        lines.append(" ".join(format(x, ".17g") for x in row))
    return "\n".join(lines) + "\n"
