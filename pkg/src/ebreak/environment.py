"""Correlated-noise two-mode thermal environments.

The environment CM is the symmetric normal form

    V_E = [[w*I, G], [G, w*I]],   G = diag(g, g'),

with thermal variance w = 2*nbar + 1 >= 1 and quadrature correlations
(g, g').  For a given w the pair (g, g') must satisfy the bona-fide
conditions

    |g| < w,  |g'| < w,  w^2 + g g' - 1 >= w |g + g'|,

and the state is separable iff additionally w^2 - 1 >= max(Gm, Gp) with
Gm = w|g + g'| - g g' and Gp = w|g - g'| + g g'.  Strict inequalities are
applied with a 1e-12 guard band so boundary points classify as physical;
points exactly on the separability boundary classify as separable.

Two one-parameter families get closed forms throughout:

* SC (g' = g): physical iff |g| <= w - 1, always separable,
  S = h(w+g) + h(w-g);
* AC (g' = -g): physical iff |g| <= sqrt(w^2 - 1), separable iff
  |g| <= w - 1, S = 2 h(sqrt(w^2 - g^2)).

Both families share the classical-correlation formula
C = h(w) - h(w - g^2/(w+1)); Gaussian discord is
D = h(w) + h(w - g^2/(w+1)) - S and mutual information I = 2 h(w) - S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DomainError, NotSpecialFamilyError
from .gaussian import I2, TwoModeCM, mode_entropy

CLASSIFY_TOL = 1e-12


class EnvClass(Enum):
    FORBIDDEN = "F"
    SEPARABLE_PHYSICAL = "S"
    ENTANGLED_PHYSICAL = "E"

    @property
    def letter(self) -> str:
        return self.value


@dataclass(frozen=True)
class EnvSpec:
    """Environment parameters; tau is optional transmission context."""

    omega: float
    g: float
    g_prime: float
    tau: float | None = None


@dataclass(frozen=True)
class CorrelationBudget:
    """Entropy / classical / discord / total correlation bits of a state."""

    entropy_s: float
    classical_c: float
    discord_d: float
    mutual_i: float


@dataclass(frozen=True)
class EnvThresholds:
    """Correlation thresholds of a family at the EB noise w = w_EB(tau)."""

    g_er: float
    g_ed: float
    g_max_separable: float
    g_max_physical: float


@dataclass(frozen=True)
class CriticalBits:
    c_crit: float
    d_crit: float
    i_crit: float


@dataclass(frozen=True)
class NonMonoWitness:
    """MSC-vs-MAC comparison at the EB point: more discord, fewer ebits."""

    c_msc: float
    c_mac: float
    d_msc: float
    d_mac: float
    logneg_msc: float
    logneg_mac: float
    delta_s: float


# ---------------------------------------------------------------------------
# construction and classification


def env_cm(spec: EnvSpec) -> TwoModeCM:
    g_block = np.diag([spec.g, spec.g_prime])
    return TwoModeCM(spec.omega * I2, spec.omega * I2, g_block)


def classify_arrays(omega: float, g, g_prime):
    """Vectorised classification: 0 = forbidden, 1 = separable, 2 = entangled."""
    g = np.asarray(g, dtype=float)
    gp = np.asarray(g_prime, dtype=float)
    w2 = omega * omega
    bona = (
        (np.abs(g) <= omega + CLASSIFY_TOL)
        & (np.abs(gp) <= omega + CLASSIFY_TOL)
        & (w2 + g * gp - 1.0 >= omega * np.abs(g + gp) - CLASSIFY_TOL)
    )
    gamma_minus = omega * np.abs(g + gp) - g * gp
    gamma_plus = omega * np.abs(g - gp) + g * gp
    separable = w2 - 1.0 >= np.maximum(gamma_minus, gamma_plus) - CLASSIFY_TOL
    return np.where(bona, np.where(separable, 1, 2), 0).astype(np.int8)


def classify(spec: EnvSpec) -> EnvClass:
    if spec.omega < 1.0 - CLASSIFY_TOL:
        raise DomainError(f"thermal variance must satisfy omega >= 1, got {spec.omega}")
    code = int(classify_arrays(spec.omega, spec.g, spec.g_prime))
    return (EnvClass.FORBIDDEN, EnvClass.SEPARABLE_PHYSICAL,
            EnvClass.ENTANGLED_PHYSICAL)[code]


def env_pts_eigenvalue(spec: EnvSpec) -> float:
    """Closed-form smallest PTS eigenvalue sqrt(w^2 - g g' - w |g - g'|)."""
    val = spec.omega ** 2 - spec.g * spec.g_prime \
        - spec.omega * abs(spec.g - spec.g_prime)
    if val < -CLASSIFY_TOL:
        raise DomainError("PTS eigenvalue undefined for this (non-physical) spec")
    return math.sqrt(max(val, 0.0))


def env_symplectic_spectrum(spec: EnvSpec) -> tuple[float, float]:
    """Closed form nu+- = sqrt(w^2 + g g' +- w |g + g'|)."""
    s = spec.omega * abs(spec.g + spec.g_prime)
    base = spec.omega ** 2 + spec.g * spec.g_prime
    return math.sqrt(max(base - s, 0.0)), math.sqrt(base + s)


# ---------------------------------------------------------------------------
# thermal-noise helpers


def omega_eb(tau: float) -> float:
    """Entanglement-breaking noise threshold (1 + tau)/(1 - tau).

    Evaluated through the exact decimal value of tau so that round
    decimals give exact thresholds (0.9 -> 19, 0.5 -> 3) instead of
    accumulating binary-representation noise in the difference 1 - tau.
    """
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"need 0 <= tau < 1, got {tau}")
    t = Fraction(str(tau))
    return float((1 + t) / (1 - t))


def nbar_to_omega(nbar: float) -> float:
    if nbar < 0.0:
        raise DomainError(f"mean photon number must be >= 0, got {nbar}")
    return 2.0 * nbar + 1.0


def omega_to_nbar(omega: float) -> float:
    if omega < 1.0:
        raise DomainError(f"thermal variance must be >= 1, got {omega}")
    return 0.5 * (omega - 1.0)


# ---------------------------------------------------------------------------
# named extremal points and thresholds

FAMILY_POINTS = ("msc", "mac_pos", "epr_pos", "epr_neg")


def family_point(kind: str, omega: float, tau: float | None = None) -> EnvSpec:
    """Extremal environments: MSC, positive MAC, positive/negative EPR.

    At omega = 1 the whole correlation plan collapses to the memoryless
    origin, so every kind returns g = 0 there.
    """
    if omega < 1.0:
        raise DomainError(f"thermal variance must be >= 1, got {omega}")
    key = kind.lower()
    if key not in FAMILY_POINTS:
        raise DomainError(f"unknown family point {kind!r}; use one of {FAMILY_POINTS}")
    if key == "msc":
        g = omega - 1.0
        return EnvSpec(omega, g, g, tau)
    if key == "mac_pos":
        g = omega - 1.0
        return EnvSpec(omega, g, -g, tau)
    g = math.sqrt(omega * omega - 1.0)
    if key == "epr_neg":
        g = -g
    return EnvSpec(omega, g, -g, tau)


def thresholds(family: str, tau: float) -> EnvThresholds:
    """Closed-form restoration/distillation thresholds at w = w_EB(tau).

    SC: g_ER = sqrt(tau(tau+2))/(1-tau), g_ED = sqrt(e^2(1+tau)^2 - 1)/(e(1-tau)),
    both families share g_max_sep = 2 tau/(1-tau); the AC physical range
    extends to g_EPR = 2 sqrt(tau)/(1-tau) with g_ER = tau/(1-tau) = g_MAC/2
    and g_ED = (1 + tau - 1/e)/(1-tau).
    """
    if not 0.0 < tau < 1.0:
        raise DomainError(f"need 0 < tau < 1, got {tau}")
    fam = family.lower()
    one_m = 1.0 - tau
    g_msc = 2.0 * tau / one_m
    if fam == "sc":
        g_er = math.sqrt(tau * (tau + 2.0)) / one_m
        g_ed = math.sqrt(math.e ** 2 * (1.0 + tau) ** 2 - 1.0) / (math.e * one_m)
        return EnvThresholds(g_er, g_ed, g_msc, g_msc)
    if fam == "ac":
        g_er = tau / one_m
        g_ed = (1.0 + tau - math.exp(-1.0)) / one_m
        g_epr = 2.0 * math.sqrt(tau) / one_m
        return EnvThresholds(g_er, g_ed, g_msc, g_epr)
    raise DomainError(f"unknown family {family!r}; use 'sc' or 'ac'")


# ---------------------------------------------------------------------------
# correlation budgets


def _family_sign(spec: EnvSpec) -> int:
    """+1 for SC (g' = g), -1 for AC (g' = -g); error otherwise."""
    if abs(spec.g_prime - spec.g) <= 1e-12:
        return +1
    if abs(spec.g_prime + spec.g) <= 1e-12:
        return -1
    raise NotSpecialFamilyError(
        f"closed forms need g' = +-g, got g={spec.g}, g'={spec.g_prime}"
    )


def _clip_bits(x: float) -> float:
    if x < -1e-9:
        raise DomainError(f"correlation measure came out negative: {x:g}")
    return max(x, 0.0)


def correlation_budget(spec: EnvSpec, method: str = "closed_form") -> CorrelationBudget:
    """Entropy S, classical bits C, discord D and mutual information I.

    method='closed_form' uses the SC/AC family formulas; method='numeric'
    delegates to the generic Gaussian-discord minimiser.
    """
    if method == "numeric":
        from .discord import gaussian_discord

        return gaussian_discord(env_cm(spec))
    if method != "closed_form":
        raise DomainError(f"unknown method {method!r}")
    sign = _family_sign(spec)
    w, g = spec.omega, abs(spec.g)
    if sign > 0:
        s = mode_entropy(w + g) + mode_entropy(w - g)
    else:
        s = 2.0 * mode_entropy(_clamp_nu(math.sqrt(max(w * w - g * g, 0.0))))
    cond = _clamp_nu(w - g * g / (w + 1.0))
    c = mode_entropy(w) - mode_entropy(cond)
    d = mode_entropy(w) + mode_entropy(cond) - s
    return CorrelationBudget(
        entropy_s=s,
        classical_c=_clip_bits(c),
        discord_d=_clip_bits(d),
        mutual_i=_clip_bits(2.0 * mode_entropy(w) - s),
    )


def _clamp_nu(nu: float) -> float:
    # guard tiny float undershoot of the nu >= 1 domain at extremal points
    return 1.0 if 1.0 - 1e-9 <= nu < 1.0 else nu


def critical_bits(family: str, tau: float) -> CriticalBits:
    """Correlation bits at the restoration threshold g = g_ER, w = w_EB."""
    fam = family.lower()
    if fam == "sc" and tau <= 2.0 / 3.0:
        raise DomainError("SC restoration requires tau > 2/3")
    th = thresholds(fam, tau)
    w = omega_eb(tau)
    sign = +1 if fam == "sc" else -1
    spec = EnvSpec(w, th.g_er, sign * th.g_er, tau)
    budget = correlation_budget(spec, "closed_form")
    return CriticalBits(budget.classical_c, budget.discord_d, budget.mutual_i)


def nonmono_witness(tau: float) -> NonMonoWitness:
    """Compare MSC and positive-MAC environments at w = w_EB(tau).

    Classical correlations coincide, MSC carries strictly more discord,
    yet MAC restores strictly more remote ebits.
    """
    if not 0.0 < tau < 1.0:
        raise DomainError(f"need 0 < tau < 1, got {tau}")
    w = omega_eb(tau)
    msc = correlation_budget(family_point("msc", w, tau), "closed_form")
    mac = correlation_budget(family_point("mac_pos", w, tau), "closed_form")
    eps_msc = math.sqrt((1.0 - tau) * (1.0 + 3.0 * tau))
    eps_mac = 1.0 - tau
    witness = NonMonoWitness(
        c_msc=msc.classical_c,
        c_mac=mac.classical_c,
        d_msc=msc.discord_d,
        d_mac=mac.discord_d,
        logneg_msc=max(0.0, -math.log2(eps_msc)),
        logneg_mac=max(0.0, -math.log2(eps_mac)),
        delta_s=mode_entropy(2.0 * w - 1.0) - 2.0 * mode_entropy(math.sqrt(2.0 * w - 1.0)),
    )
    assert abs(witness.c_msc - witness.c_mac) <= 1e-9
    assert witness.d_msc > witness.d_mac
    assert witness.logneg_msc < witness.logneg_mac
    return witness
