"""EPR transmission: output CMs, asymptotics, EPR-variance evolution."""

import math

import numpy as np
import pytest
from conftest import random_env_spec

from ebreak.environment import EnvSpec, env_cm, family_point, omega_eb, thresholds
from ebreak.errors import DomainError, UnphysicalEnvError
from ebreak.gaussian import pts_eigenvalue, symplectic_spectrum, validate_cm
from ebreak.propagation import (
    EprInput,
    asymptotic_output_spectrum,
    asymptotic_pts_eigenvalue,
    asymptotic_report,
    epr_variances,
    epr_variances_limit,
    epr_variances_limit_eb,
    single_mode_transmit,
    two_mode_transmit,
)

E_INV = math.exp(-1.0)


class TestEprInput:
    def test_mu_prime(self):
        assert EprInput(2.0).mu_prime == pytest.approx(math.sqrt(3.0), rel=1e-15)

    def test_cm_pure(self):
        cm = EprInput(4.0).cm
        assert np.linalg.det(cm.matrix) == pytest.approx(1.0, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            EprInput(0.5)


class TestSingleMode:
    def test_transparent_channel(self):
        inp = EprInput(3.0)
        assert single_mode_transmit(inp, 1.0, 5.0).allclose(inp.cm)

    def test_block_structure(self):
        cm = single_mode_transmit(EprInput(2.0), 0.5, 3.0)
        assert np.allclose(cm.a_block, 2.0 * np.eye(2))
        assert np.allclose(cm.b_block, (0.5 * 2.0 + 0.5 * 3.0) * np.eye(2))
        assert np.allclose(cm.c_block,
                           math.sqrt(3.0) * math.sqrt(0.5) * np.diag([1, -1]))

    def test_eb_threshold_reaches_one(self):
        cm = single_mode_transmit(EprInput(1.0e6), 0.5, 3.0)
        assert pts_eigenvalue(cm) == pytest.approx(1.0, abs=1e-3)

    def test_above_threshold_always_separable(self):
        for mu in (1.0, 2.0, 10.0, 1.0e4):
            cm = single_mode_transmit(EprInput(mu), 0.5, 4.0)
            assert pts_eigenvalue(cm) >= 1.0 - 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            single_mode_transmit(EprInput(2.0), 1.5, 3.0)
        with pytest.raises(DomainError):
            single_mode_transmit(EprInput(2.0), 0.5, 0.5)


class TestTwoMode:
    def test_transparent(self):
        inp = EprInput(3.0)
        env = EnvSpec(5.0, 2.0, -2.0, tau=1.0)
        assert two_mode_transmit(inp, env).allclose(inp.cm)

    def test_full_reflection_returns_environment(self):
        env = EnvSpec(5.0, 2.0, -2.0, tau=0.0)
        assert two_mode_transmit(EprInput(7.0), env).allclose(env_cm(env))

    def test_mac_finite_mu_near_asymptote(self):
        env = EnvSpec(19.0, 18.0, -18.0, tau=0.9)
        cm = two_mode_transmit(EprInput(1.0e4), env)
        assert pts_eigenvalue(cm) == pytest.approx(0.1, abs=1e-2)

    def test_output_always_physical(self, rng):
        for _ in range(100):
            env = random_env_spec(rng, tau="random")
            for mu in (1.0, 2.5, 50.0):
                assert validate_cm(two_mode_transmit(EprInput(mu), env))

    def test_rejects_forbidden_env(self):
        with pytest.raises(UnphysicalEnvError):
            two_mode_transmit(EprInput(2.0), EnvSpec(2.0, 1.9, 1.9, tau=0.5))

    def test_requires_tau(self):
        with pytest.raises(DomainError):
            two_mode_transmit(EprInput(2.0), EnvSpec(2.0, 0.5, 0.5))


class TestBeamSplitterDilation:
    """Outputs re-derived from the explicit 8x8 beam-splitter symplectic."""

    @staticmethod
    def _dilated_output(inp, env):
        # modes ordered (A, B, E1, E2); one beam splitter per (system, env)
        tau = env.tau
        t, r = math.sqrt(tau), math.sqrt(1.0 - tau)
        s = np.eye(8)
        for sys, anc in ((0, 2), (1, 3)):
            a, e = 2 * sys, 2 * anc
            s[a:a + 2, a:a + 2] = t * np.eye(2)
            s[a:a + 2, e:e + 2] = r * np.eye(2)
            s[e:e + 2, a:a + 2] = -r * np.eye(2)
            s[e:e + 2, e:e + 2] = t * np.eye(2)
        v_in = np.zeros((8, 8))
        v_in[:4, :4] = inp.cm.matrix
        v_in[4:, 4:] = env_cm(env).matrix
        return (s @ v_in @ s.T)[:4, :4]

    def test_two_mode_transmit_matches_dilation(self, rng):
        for _ in range(50):
            env = random_env_spec(rng, tau="random")
            inp = EprInput(float(rng.uniform(1.0, 30.0)))
            direct = two_mode_transmit(inp, env).matrix
            dilated = self._dilated_output(inp, env)
            assert np.max(np.abs(direct - dilated)) < 1e-10

    def test_single_mode_transmit_matches_dilation(self, rng):
        for _ in range(20):
            tau = float(rng.uniform(0.0, 1.0))
            w = float(rng.uniform(1.0, 10.0))
            inp = EprInput(float(rng.uniform(1.0, 30.0)))
            # only mode B interacts; mode A's beam splitter is the identity
            env = EnvSpec(w, 0.0, 0.0, tau=tau)
            t, r = math.sqrt(tau), math.sqrt(1.0 - tau)
            s = np.eye(8)
            s[2:4, 2:4] = t * np.eye(2)
            s[2:4, 6:8] = r * np.eye(2)
            s[6:8, 2:4] = -r * np.eye(2)
            s[6:8, 6:8] = t * np.eye(2)
            v_in = np.zeros((8, 8))
            v_in[:4, :4] = inp.cm.matrix
            v_in[4:, 4:] = env_cm(env).matrix
            dilated = (s @ v_in @ s.T)[:4, :4]
            direct = single_mode_transmit(inp, tau, w).matrix
            assert np.max(np.abs(direct - dilated)) < 1e-10


class TestAsymptoticReport:
    def test_memoryless_at_eb_never_reactivates(self):
        for tau in (0.1, 0.5, 0.9):
            env = EnvSpec(omega_eb(tau), 0.0, 0.0, tau=tau)
            rep = asymptotic_report(env)
            assert rep.eps == pytest.approx(1.0 + tau, rel=1e-12)
            assert rep.separable

    def test_epr_env_global_optimum(self):
        tau = 0.9
        spec = family_point("epr_pos", omega_eb(tau), tau)
        rep = asymptotic_report(spec)
        assert rep.eps == pytest.approx((1 - math.sqrt(tau)) ** 2, rel=1e-10)
        # cross-check against the finite-mu eigensolver route
        exact = pts_eigenvalue(two_mode_transmit(EprInput(1.0e6), spec))
        assert rep.eps == pytest.approx(exact, abs=1e-4)

    def test_sc_tau09_endpoint(self):
        env = EnvSpec(19.0, 18.0, 18.0, tau=0.9)
        rep = asymptotic_report(env)
        assert rep.eps == pytest.approx(math.sqrt(0.37), rel=1e-10)
        exact = pts_eigenvalue(two_mode_transmit(EprInput(1.0e6), env))
        assert rep.eps == pytest.approx(exact, abs=1e-4)

    def test_coherent_info_log_base(self):
        env = EnvSpec(19.0, 18.0, -18.0, tau=0.9)
        rep = asymptotic_report(env)
        assert rep.coherent_info == pytest.approx(-math.log2(math.e * rep.eps),
                                                  rel=1e-12)
        assert rep.distillable_one_way == (rep.eps < E_INV)

    def test_convergence_monotone_in_mu(self, rng):
        mus = (1.0e2, 1.0e3, 1.0e4, 1.0e6)
        for _ in range(100):
            env = random_env_spec(rng, tau="random")
            target = asymptotic_pts_eigenvalue(env)
            gaps = [
                abs(pts_eigenvalue(two_mode_transmit(EprInput(mu), env)) - target)
                for mu in mus
            ]
            assert gaps[-1] < 1e-2
            assert all(b <= a + 1e-10 for a, b in zip(gaps, gaps[1:]))

    def test_output_spectrum_large_mu(self, rng):
        mu = 1.0e6
        for _ in range(50):
            env = random_env_spec(rng, tau="random")
            approx = asymptotic_output_spectrum(env, mu)
            exact = symplectic_spectrum(two_mode_transmit(EprInput(mu), env))
            assert approx.nu_plus == pytest.approx(exact.nu_plus, rel=1e-3)
            assert approx.nu_minus == pytest.approx(exact.nu_minus, rel=1e-3)

    def test_sc_never_entangled_below_two_thirds(self):
        for tau in (0.3, 0.5, 0.6, 2.0 / 3.0):
            gs = np.linspace(0.0, thresholds("sc", tau).g_max_physical, 500)
            eps = np.sqrt((1 + tau) ** 2 - (1 - tau) ** 2 * gs ** 2)
            assert np.all(eps >= 1.0 - 1e-12)


class TestEprVariances:
    def test_memoryless_limit(self):
        for tau in (0.3, 0.9):
            lim = epr_variances_limit_eb(tau, 0.0, 0.0)
            assert lim.vq_minus == pytest.approx(1.0 + tau, rel=1e-12)
            assert lim.vp_plus == pytest.approx(1.0 + tau, rel=1e-12)
            assert not lim.epr_condition

    def test_ac_epr_condition_iff_above_threshold(self):
        for tau in (0.3, 0.9):
            g_er = tau / (1.0 - tau)
            g_max = 2.0 * math.sqrt(tau) / (1.0 - tau)
            for g in np.linspace(0.01, g_max, 400):
                if abs(g - g_er) < 1e-9:
                    continue
                lim = epr_variances_limit_eb(tau, g, -g)
                assert lim.vq_minus == pytest.approx(lim.vp_plus, rel=1e-12)
                assert lim.epr_condition == (g > g_er)

    def test_sc_never_epr(self):
        for tau in (0.3, 0.9):
            g_max = 2.0 * tau / (1.0 - tau)
            for g in np.linspace(-g_max, g_max, 401):
                lim = epr_variances_limit_eb(tau, g, g)
                assert not lim.epr_condition
                assert min(lim.vq_minus, lim.vp_plus) == pytest.approx(
                    (1 + tau) - (1 - tau) * abs(g), rel=1e-9, abs=1e-12)
                assert max(lim.vq_minus, lim.vp_plus) == pytest.approx(
                    (1 + tau) + (1 - tau) * abs(g), rel=1e-12)

    def test_exact_matches_quadrature_arithmetic(self, rng):
        # V(q-') and V(p+') from the Bogoliubov combination of CM entries
        for _ in range(50):
            env = random_env_spec(rng, tau="random")
            mu = float(rng.uniform(1.0, 20.0))
            out = two_mode_transmit(EprInput(mu), env)
            m = out.matrix
            vq = 0.5 * (m[0, 0] + m[2, 2]) - m[0, 2]
            vp = 0.5 * (m[1, 1] + m[3, 3]) + m[1, 3]
            got = epr_variances(EprInput(mu), env)
            assert got.vq_minus == pytest.approx(vq, rel=1e-12)
            assert got.vp_plus == pytest.approx(vp, rel=1e-12)

    def test_limit_consistency(self, rng):
        for _ in range(20):
            env = random_env_spec(rng, tau="random")
            lim = epr_variances_limit(env)
            fin = epr_variances(EprInput(1.0e8), env)
            assert fin.vq_minus == pytest.approx(lim.vq_minus, abs=1e-6)
            assert fin.vp_plus == pytest.approx(lim.vp_plus, abs=1e-6)
