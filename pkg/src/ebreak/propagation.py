"""Transmission of EPR states through correlated thermal-lossy environments.

Both travelling modes pass beam splitters of transmissivity tau whose
environment ports carry a correlated two-mode thermal state (variance
omega, correlation block G = diag(g, g')).  Closed forms:

* keeping A, sending B:  V' = [[mu I, mu' sqrt(tau) Z], [., x I]] with
  x = tau mu + (1 - tau) omega; in the large-mu limit the output PTS
  eigenvalue tends to (1 - tau) omega / (1 + tau), giving the
  entanglement-breaking noise threshold omega_EB = (1 + tau)/(1 - tau);
* sending both:  V' = tau V_AB + (1 - tau) V_E, i.e. blocks x I and
  H = tau mu' Z + (1 - tau) G;
* large-mu PTS eigenvalue  eps = (1 - tau) sqrt((omega - g)(omega + g')),
  log-negativity N = max(0, -log2 eps) and coherent information
  I(A>B) = -log2(e * eps), so the output is distillable for eps < 1/e;
* EPR quadrature variances
  diag(Lambda) = tau (mu - mu') I + (1 - tau)(omega I - Z G),
  with mu -> inf limit (1 - tau)(omega I - Z G) and, at omega = omega_EB,
  (1 + tau) I - (1 - tau) Z G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .environment import EnvClass, EnvSpec, classify
from .errors import DomainError, UnphysicalEnvError
from .gaussian import (
    EntanglementReport,
    I2,
    SymplecticSpectrum,
    TwoModeCM,
    Z2,
    epr_cm,
)

#: default EPR variance used when cross-checking asymptotic formulas
LARGE_MU = 1.0e6


@dataclass(frozen=True)
class EprInput:
    """Two-mode squeezed vacuum source with quadrature variance mu >= 1."""

    mu: float

    def __post_init__(self):
        if self.mu < 1.0:
            raise DomainError(f"EPR variance must satisfy mu >= 1, got {self.mu}")

    @property
    def mu_prime(self) -> float:
        return math.sqrt(self.mu * self.mu - 1.0)

    @property
    def cm(self) -> TwoModeCM:
        return epr_cm(self.mu)


@dataclass(frozen=True)
class EprVariances:
    """Variances of the EPR quadratures (qA - qB)/sqrt2 and (pA + pB)/sqrt2."""

    vq_minus: float
    vp_plus: float

    @property
    def epr_condition(self) -> bool:
        """Both variances below vacuum noise."""
        return self.vq_minus < 1.0 and self.vp_plus < 1.0


def _require_tau(env: EnvSpec) -> float:
    if env.tau is None:
        raise DomainError("environment spec carries no transmissivity tau")
    if not 0.0 <= env.tau <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {env.tau}")
    return env.tau


def single_mode_transmit(inp: EprInput, tau: float, omega: float) -> TwoModeCM:
    """Keep mode A, send mode B through the lossy channel (tau, omega)."""
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {tau}")
    if omega < 1.0:
        raise DomainError(f"thermal variance must be >= 1, got {omega}")
    x = tau * inp.mu + (1.0 - tau) * omega
    c = inp.mu_prime * math.sqrt(tau)
    return TwoModeCM(inp.mu * I2, x * I2, c * Z2)


def two_mode_transmit(inp: EprInput, env: EnvSpec) -> TwoModeCM:
    """Send both modes; output CM is tau V_AB + (1 - tau) V_E."""
    tau = _require_tau(env)
    if classify(env) is EnvClass.FORBIDDEN:
        raise UnphysicalEnvError(
            f"(omega={env.omega}, g={env.g}, g'={env.g_prime}) is not bona fide"
        )
    x = tau * inp.mu + (1.0 - tau) * env.omega
    h00 = tau * inp.mu_prime + (1.0 - tau) * env.g
    h11 = -tau * inp.mu_prime + (1.0 - tau) * env.g_prime
    return TwoModeCM(x * I2, x * I2, [[h00, 0.0], [0.0, h11]])


def asymptotic_pts_eigenvalue(env: EnvSpec) -> float:
    """Large-mu output PTS eigenvalue (1 - tau) sqrt((w - g)(w + g'))."""
    tau = _require_tau(env)
    if tau >= 1.0:
        raise DomainError("asymptotic formulas need tau < 1")
    prod = (env.omega - env.g) * (env.omega + env.g_prime)
    return (1.0 - tau) * math.sqrt(max(prod, 0.0))


def asymptotic_report(env: EnvSpec) -> EntanglementReport:
    """Large-mu entanglement report of the two-mode output.

    Distillability sits exactly at eps = 1/e since
    I(A>B) = -log2(e * eps) > 0 there.
    """
    if classify(env) is EnvClass.FORBIDDEN:
        raise UnphysicalEnvError(
            f"(omega={env.omega}, g={env.g}, g'={env.g_prime}) is not bona fide"
        )
    eps = asymptotic_pts_eigenvalue(env)
    coh = -math.log2(math.e * eps) if eps > 0.0 else math.inf
    return EntanglementReport(
        eps=eps,
        logneg=max(0.0, -math.log2(eps)) if eps > 0.0 else math.inf,
        coherent_info=coh,
        separable=eps >= 1.0,
        distillable_one_way=eps < math.exp(-1.0),
    )


def asymptotic_output_spectrum(env: EnvSpec, mu: float = LARGE_MU) -> SymplecticSpectrum:
    """Large-mu output symplectic spectrum, growing like sqrt(mu)."""
    tau = _require_tau(env)
    base = (1.0 - tau) * tau * mu
    mid = 2.0 * env.omega + env.g_prime - env.g
    spread = abs(env.g + env.g_prime)
    return SymplecticSpectrum(
        math.sqrt(max((mid - spread) * base, 0.0)),
        math.sqrt(max((mid + spread) * base, 0.0)),
    )


def epr_variances(inp: EprInput, env: EnvSpec) -> EprVariances:
    """Exact output EPR variances at finite mu."""
    tau = _require_tau(env)
    squeeze = tau * (inp.mu - inp.mu_prime)
    return EprVariances(
        vq_minus=squeeze + (1.0 - tau) * (env.omega - env.g),
        vp_plus=squeeze + (1.0 - tau) * (env.omega + env.g_prime),
    )


def epr_variances_limit(env: EnvSpec) -> EprVariances:
    """mu -> inf limit (1 - tau)(omega I - Z G) of the EPR variances."""
    tau = _require_tau(env)
    return EprVariances(
        vq_minus=(1.0 - tau) * (env.omega - env.g),
        vp_plus=(1.0 - tau) * (env.omega + env.g_prime),
    )


def epr_variances_limit_eb(tau: float, g: float, g_prime: float) -> EprVariances:
    """mu -> inf limit evaluated at the EB noise omega = omega_EB(tau)."""
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"need 0 <= tau < 1, got {tau}")
    return EprVariances(
        vq_minus=(1.0 + tau) - (1.0 - tau) * g,
        vp_plus=(1.0 + tau) + (1.0 - tau) * g_prime,
    )
