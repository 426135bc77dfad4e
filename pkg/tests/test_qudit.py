"""Finite-dimensional channels, twirling and dilations."""

import math

import numpy as np
import pytest

from ebreak.errors import (
    BadProbabilitiesError,
    BadSubsystemError,
    DesignUnavailableError,
    DimensionMismatchError,
    DomainError,
    NotRandomUnitaryError,
    ParamOutOfRangeError,
)
from ebreak.qudit import (
    DensityMatrix,
    clifford_design_channel,
    clifford_group_1q,
    correlated_pauli_channel,
    density_matrix_from_json,
    density_matrix_to_json,
    depolarizing_is_eb,
    design_average,
    dilate_and_check,
    fock_dephase,
    flip_operator,
    haar_unitary,
    is_ppt,
    isotropic_state,
    max_entangled_vector,
    min_pt_eigenvalue,
    one_side_depolarize,
    partial_haar_average,
    partial_haar_average_mc,
    partial_transpose,
    pauli_channel,
    pt_spectrum,
    qubit_werner_state,
    random_density_matrix,
    trace_distance,
    triplet_state,
    twirl,
    twirl_uustar_via_pt,
    werner_mu_from_gamma,
    werner_state,
)

UNIFORM = (0.25, 0.25, 0.25, 0.25)


class TestDensityMatrix:
    def test_validation(self):
        with pytest.raises(DomainError):
            DensityMatrix((2, 2), np.eye(4))  # trace 4
        with pytest.raises(DomainError):
            m = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
            DensityMatrix((2, 2), m)  # negative eigenvalue
        with pytest.raises(DimensionMismatchError):
            DensityMatrix((2, 3), np.eye(4) / 4)

    def test_reduced_states(self):
        rho = triplet_state()
        assert np.allclose(rho.reduced_a(), np.eye(2) / 2)
        assert np.allclose(rho.reduced_b(), np.eye(2) / 2)

    def test_json_round_trip(self, rng):
        rho = random_density_matrix((2, 3), rng)
        again = density_matrix_from_json(density_matrix_to_json(rho))
        assert again.dims == rho.dims
        assert np.allclose(again.matrix, rho.matrix, atol=0.0)


class TestPauliChannels:
    def test_werner_invariant_under_any_probs(self, rng):
        rho = qubit_werner_state(0.5)
        for _ in range(10):
            p = rng.dirichlet(np.ones(4))
            out = pauli_channel(rho, p)
            assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12

    def test_identity_probs(self, rng):
        rho = random_density_matrix((2, 2), rng)
        out = pauli_channel(rho, (1.0, 0.0, 0.0, 0.0))
        assert np.max(np.abs(out.matrix - rho.matrix)) == 0.0

    def test_maximally_mixed_fixed(self):
        rho = DensityMatrix((2, 2), np.eye(4, dtype=complex) / 4)
        out = pauli_channel(rho, (0.4, 0.3, 0.2, 0.1))
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-15

    def test_triplet_werner_like_also_fixed(self, rng):
        # the triplet-based (isotropic) qubit family is a fixed point too,
        # since the map is unchanged under P (x) P -> P (x) P*
        rho = isotropic_state(2, 0.6)
        out = pauli_channel(rho, rng.dirichlet(np.ones(4)))
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12

    def test_conjugate_pair_equivalent(self, rng):
        # replacing P (x) P by P (x) P* leaves the channel unchanged
        rho = random_density_matrix((2, 2), rng)
        p = (0.5, 0.2, 0.2, 0.1)
        from ebreak.qudit import PAULIS

        direct = pauli_channel(rho, p).matrix
        alt = sum(
            pk * np.kron(pauli, pauli.conj()) @ rho.matrix
            @ np.kron(pauli, pauli.conj()).conj().T
            for pk, pauli in zip(p, PAULIS)
        )
        assert np.max(np.abs(direct - alt)) < 1e-12

    def test_bad_probs(self):
        with pytest.raises(BadProbabilitiesError):
            pauli_channel(triplet_state(), (0.5, 0.5, 0.5, -0.5))


class TestDepolarize:
    def test_uniform_fully_depolarizes_triplet(self):
        out = one_side_depolarize(triplet_state(), UNIFORM)
        assert np.allclose(out.matrix, np.eye(4) / 4, atol=1e-15)

    def test_pt_spectrum_is_half_minus_p(self):
        p = (0.6, 0.2, 0.1, 0.1)
        out = one_side_depolarize(triplet_state(), p)
        expected = np.sort([0.5 - pk for pk in p])
        assert np.allclose(pt_spectrum(out), expected, atol=1e-12)
        assert min_pt_eigenvalue(out) == pytest.approx(-0.1, abs=1e-12)
        assert not depolarizing_is_eb(p)

    def test_boundary_probs(self):
        out = one_side_depolarize(triplet_state(), (0.5, 0.5, 0.0, 0.0))
        assert min_pt_eigenvalue(out) == pytest.approx(0.0, abs=1e-12)
        assert depolarizing_is_eb((0.5, 0.5, 0.0, 0.0))

    def test_random_probs_spectrum(self, rng):
        for _ in range(25):
            p = rng.dirichlet(np.ones(4))
            out = one_side_depolarize(triplet_state(), p)
            assert np.allclose(pt_spectrum(out), np.sort(0.5 - p), atol=1e-12)
            assert is_ppt(out) == depolarizing_is_eb(p)


class TestPartialTranspose:
    def test_involution(self, rng):
        rho = random_density_matrix((2, 3), rng)
        m = partial_transpose(rho, 1)
        dims = rho.dims
        from ebreak.qudit import _pt_matrix

        assert np.allclose(_pt_matrix(m, dims, 1), rho.matrix, atol=0.0)

    def test_product_state_psd(self, rng):
        a = random_density_matrix((2, 1), rng).matrix[:2, :2] * 2
        a = a / np.trace(a)
        b = np.eye(3) / 3
        rho = DensityMatrix((2, 3), np.kron(a, b))
        assert is_ppt(rho)

    def test_triplet_min_eigenvalue(self):
        assert min_pt_eigenvalue(triplet_state()) == pytest.approx(-0.5, abs=1e-12)

    def test_bad_subsystem(self):
        with pytest.raises(BadSubsystemError):
            partial_transpose(triplet_state(), 2)


class TestInvariantFamilies:
    def test_qubit_werner_pt_minimum(self):
        # (1 - 3 gamma)/4 is the smallest PT eigenvalue throughout
        # gamma >= 0; below zero the (1 + gamma)/4 branch takes over
        for gamma in np.linspace(0.0, 1.0, 41):
            rho = qubit_werner_state(float(gamma))
            assert min_pt_eigenvalue(rho) == pytest.approx((1 - 3 * gamma) / 4,
                                                           abs=1e-12)

    def test_qubit_forms_agree(self):
        for gamma in (-0.2, 0.0, 0.3, 0.8):
            mu = werner_mu_from_gamma(gamma)
            a = werner_state(2, mu)
            b = qubit_werner_state(gamma)
            assert np.max(np.abs(a.matrix - b.matrix)) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_werner_npt_iff_mu_below_minus_inverse_d(self, d):
        for mu in np.linspace(-1.0, 1.0, 41):
            rho = werner_state(d, float(mu))
            band = abs(mu + 1.0 / d) < 1e-9
            if not band:
                assert (min_pt_eigenvalue(rho) < -1e-10) == (mu < -1.0 / d)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_isotropic_npt_iff_gamma_above_threshold(self, d):
        lo = -1.0 / (d * d - 1)
        for gamma in np.linspace(lo, 1.0, 41):
            rho = isotropic_state(d, float(gamma))
            if abs(gamma - 1.0 / (1 + d)) > 1e-9:
                assert (min_pt_eigenvalue(rho) < -1e-10) == (gamma > 1.0 / (1 + d))

    def test_isotropic_pure_limit(self):
        v = max_entangled_vector(3)
        rho = isotropic_state(3, 1.0)
        assert np.allclose(rho.matrix, np.outer(v, v.conj()), atol=1e-15)

    def test_flip_operator_swaps(self):
        d = 3
        v = flip_operator(d)
        a, b = np.zeros(d), np.zeros(d)
        a[1], b[2] = 1.0, 1.0
        assert np.allclose(v @ np.kron(a, b), np.kron(b, a))

    def test_param_ranges(self):
        with pytest.raises(ParamOutOfRangeError):
            werner_state(3, 1.5)
        with pytest.raises(ParamOutOfRangeError):
            isotropic_state(3, -0.5)
        with pytest.raises(ParamOutOfRangeError):
            werner_state(9, 0.0)


class TestCliffordDesign:
    def test_group_size(self):
        assert len(clifford_group_1q()) == 24

    def test_all_unitary_and_distinct(self):
        group = clifford_group_1q()
        for u in group:
            assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)

    def test_haar_identity_on_random_operators(self, rng):
        for _ in range(20):
            op = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            avg = design_average(op)
            assert np.max(np.abs(avg - np.trace(op) / 2 * np.eye(2))) < 1e-12

    def test_design_twirl_commutes_with_group_action(self, rng):
        # the twirled state commutes with U (x) U for any unitary
        rho = random_density_matrix((2, 2), rng)
        out = twirl(rho, "uu", "design")
        for _ in range(100):
            u = haar_unitary(2, rng)
            op = np.kron(u, u)
            assert np.max(np.abs(op @ out.matrix - out.matrix @ op)) < 1e-10


class TestTwirl:
    def test_werner_fixed_point(self):
        rho = qubit_werner_state(0.5)
        out = twirl(rho, "uu", "design")
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12

    def test_isotropic_fixed_point_uustar(self):
        rho = isotropic_state(2, 0.5)
        out = twirl(rho, "uustar", "design")
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12

    def test_uu_output_is_werner(self, rng):
        # any twirled state lands in the flip-symmetric family; the
        # parameter follows from f = tr(rho V) = (d + mu d^2)/(d^2 + d mu)
        d = 2
        rho = random_density_matrix((d, d), rng)
        out = twirl(rho, "uu", "design")
        f = np.trace(out.matrix @ flip_operator(d)).real
        mu = (d - f * d * d) / (f * d - d * d)
        ref = werner_state(d, float(mu))
        assert np.max(np.abs(out.matrix - ref.matrix)) < 1e-10

    def test_haar_mc_matches_design(self, rng):
        for k in range(5):
            rho = random_density_matrix((2, 2), 300 + k)
            mc = twirl(rho, "uu", "haar_mc", n_samples=100_000, seed=1234)
            exact = twirl(rho, "uu", "design")
            assert trace_distance(mc, exact) < 5e-3

    def test_haar_mc_reproducible(self, rng):
        rho = random_density_matrix((2, 2), rng)
        a = twirl(rho, "uustar", "haar_mc", n_samples=10_000, seed=7)
        b = twirl(rho, "uustar", "haar_mc", n_samples=10_000, seed=7)
        assert np.array_equal(a.matrix, b.matrix)

    def test_uustar_direct_equals_pt_route(self, rng):
        for _ in range(10):
            rho = random_density_matrix((2, 2), rng)
            direct = twirl(rho, "uustar", "design")
            routed = twirl_uustar_via_pt(rho, "design")
            assert np.max(np.abs(direct.matrix - routed.matrix)) < 1e-12

    def test_haar_mc_d3_isotropic_fixed_point(self):
        rho = isotropic_state(3, 0.6)
        out = twirl(rho, "uustar", "haar_mc", n_samples=40_000, seed=5)
        assert trace_distance(out, rho) < 1e-2

    def test_errors(self, rng):
        with pytest.raises(DimensionMismatchError):
            twirl(random_density_matrix((2, 3), rng))
        with pytest.raises(DesignUnavailableError):
            twirl(random_density_matrix((3, 3), rng), "uu", "design")
        with pytest.raises(DomainError):
            twirl(random_density_matrix((2, 2), rng), "vv")


class TestPartialHaar:
    def test_product_operator(self, rng):
        a = random_density_matrix((2, 1), rng).matrix[:2, :2] * 2
        a = a / np.trace(a)
        b = random_density_matrix((3, 1), rng).matrix[:3, :3] * 3
        b = b / np.trace(b)
        t = np.kron(a, b)
        avg = partial_haar_average(t, (2, 3))
        assert np.allclose(avg, np.kron(np.eye(2) / 2, b), atol=1e-12)

    def test_triplet_projector(self):
        avg = partial_haar_average(triplet_state().matrix, (2, 2))
        assert np.allclose(avg, np.eye(4) / 4, atol=1e-12)

    def test_traceless_a_annihilated(self):
        z = np.diag([1.0, -1.0]).astype(complex)
        t = np.kron(z, np.eye(3, dtype=complex))
        assert np.max(np.abs(partial_haar_average(t, (2, 3)))) < 1e-15

    def test_mc_converges(self, rng):
        t = random_density_matrix((2, 2), rng).matrix
        exact = partial_haar_average(t, (2, 2))
        approx = partial_haar_average_mc(t, (2, 2), 60_000, seed=3)
        assert np.max(np.abs(exact - approx)) < 5e-3


class TestDilation:
    def test_correlated_pauli_dilation(self):
        channel = correlated_pauli_channel((0.5, 1 / 6, 1 / 6, 1 / 6))
        dilation, report = dilate_and_check(channel)
        assert report.passed
        assert report.max_deviation <= 1e-12
        assert report.zero_discord
        env = dilation.env_state
        assert env.dims == (4, 4)
        off = env.matrix - np.diag(np.diag(env.matrix))
        assert np.max(np.abs(off)) == 0.0

    def test_trivial_single_unitary_channel(self):
        channel = correlated_pauli_channel((1.0, 0.0, 0.0, 0.0))
        dilation, report = dilate_and_check(channel)
        assert report.passed
        # weight-1 environment: a product state |00><00|
        assert dilation.env_state.matrix[0, 0] == pytest.approx(1.0)

    def test_clifford_design_dilation(self):
        _, report = dilate_and_check(clifford_design_channel("uu"))
        assert report.passed
        assert report.max_deviation <= 1e-12

    def test_dilation_matches_channel_on_random_states(self, rng):
        channel = correlated_pauli_channel((0.4, 0.3, 0.2, 0.1))
        dilation, _ = dilate_and_check(channel)
        w = dilation.joint_unitary
        assert np.allclose(w.conj().T @ w, np.eye(w.shape[0]), atol=1e-12)

    def test_rejects_non_unitary(self):
        bad = np.diag([1.0, 0.5])
        with pytest.raises(NotRandomUnitaryError):
            from ebreak.qudit import KrausChannel, PAULI_I

            KrausChannel(np.array([0.5, 0.5]), (PAULI_I, bad), (PAULI_I, PAULI_I))


class TestFockDephase:
    def test_product_state_b_untouched(self, rng):
        a = np.diag([0.3, 0.3, 0.4]).astype(complex)
        b = random_density_matrix((3, 1), rng).matrix[:3, :3] * 3
        b = b / np.trace(b)
        rho = DensityMatrix((3, 3), np.kron(a, b))
        out = fock_dephase(rho)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-15)

    def test_truncated_epr_becomes_ppt(self):
        d = 5
        c = np.array([math.exp(-0.3 * k) for k in range(d)])
        c /= np.linalg.norm(c)
        v = np.zeros(d * d, dtype=complex)
        v[:: d + 1] = c
        rho = DensityMatrix((d, d), np.outer(v, v.conj()))
        assert min_pt_eigenvalue(rho) < -1e-3  # entangled before dephasing
        out = fock_dephase(rho)
        assert is_ppt(out)

    def test_max_entangled_becomes_diagonal(self):
        d = 4
        v = max_entangled_vector(d)
        rho = DensityMatrix((d, d), np.outer(v, v.conj()))
        out = fock_dephase(rho)
        assert np.allclose(out.matrix, np.diag(np.diag(out.matrix)), atol=1e-15)
        assert is_ppt(out)

    def test_idempotent_and_ppt_on_random_states(self):
        for d in (3, 4, 5, 6):
            for k in range(250):
                rho = random_density_matrix((d, d), 1000 * d + k)
                out = fock_dephase(rho)
                assert is_ppt(out)
                again = fock_dephase(out)
                assert np.max(np.abs(again.matrix - out.matrix)) == 0.0
