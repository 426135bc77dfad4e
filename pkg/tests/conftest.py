"""Shared fixtures and independent numerical oracles.

The oracles deliberately avoid the closed forms used by the package:
symplectic spectra come from a generic complex eigensolver applied to
i*Omega*V, partial transposition is done by an explicit momentum flip,
and random physical CMs are built from Williamson forms conjugated by
random symplectics.
"""

import math

import numpy as np
import pytest

from ebreak.environment import EnvSpec, classify_arrays
from ebreak.gaussian import OMEGA2, TwoModeCM

MOMENTUM_FLIP_B = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_oracle(matrix: np.ndarray) -> tuple[float, float]:
    """Moduli of the eigenvalues of i*Omega*V (each doubly degenerate)."""
    mods = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA2 @ matrix)))
    return float(mods[0]), float(mods[2])


def pts_oracle(matrix: np.ndarray) -> float:
    flipped = MOMENTUM_FLIP_B @ matrix @ MOMENTUM_FLIP_B
    mods = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA2 @ flipped)))
    return float(mods[0])


def random_single_mode_symplectic(rng: np.random.Generator,
                                  max_squeeze: float = 1.6) -> np.ndarray:
    def rot(theta):
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c, s], [-s, c]])

    r = rng.uniform(1.0, max_squeeze)
    return rot(rng.uniform(0, 2 * math.pi)) @ np.diag([r, 1.0 / r]) \
        @ rot(rng.uniform(0, 2 * math.pi))


def random_symplectic(rng: np.random.Generator) -> np.ndarray:
    def local():
        s = np.zeros((4, 4))
        s[:2, :2] = random_single_mode_symplectic(rng)
        s[2:, 2:] = random_single_mode_symplectic(rng)
        return s

    tau = rng.uniform(0.05, 0.95)
    t, r = math.sqrt(tau), math.sqrt(1 - tau)
    bs = np.block([[t * np.eye(2), r * np.eye(2)],
                   [-r * np.eye(2), t * np.eye(2)]])
    return local() @ bs @ local()


def random_physical_cm(rng: np.random.Generator,
                       nu_max: float = 3.0) -> TwoModeCM:
    """Williamson form with nu in [1, nu_max] conjugated by a random symplectic."""
    nus = rng.uniform(1.0, nu_max, size=2)
    w = np.diag([nus[0], nus[0], nus[1], nus[1]])
    s = random_symplectic(rng)
    v = s @ w @ s.T
    return TwoModeCM.from_matrix(0.5 * (v + v.T))


def random_env_spec(rng: np.random.Generator, omega_lo: float = 1.05,
                    omega_hi: float = 8.0, tau=None) -> EnvSpec:
    """Rejection-sample a bona-fide environment, optionally with a tau."""
    while True:
        w = rng.uniform(omega_lo, omega_hi)
        g = rng.uniform(-w, w)
        gp = rng.uniform(-w, w)
        if int(classify_arrays(w, g, gp)) != 0:
            t = rng.uniform(0.05, 0.95) if tau == "random" else tau
            return EnvSpec(w, g, gp, t)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240911)
