"""Finite-dimensional states, correlated random-unitary channels and twirling.

Covers the discrete half of the toolbox: density matrices on d_A x d_B,
correlated Pauli channels and their one-sided depolarizing marginals,
Werner/isotropic invariant families, U(x)U and U(x)U* twirling (exact
24-element single-qubit Clifford design or seeded Haar Monte Carlo),
partial Haar averages, control-unitary dilations of random-unitary
channels, and uniform number-basis dephasing.

Matrices are dense; the supported local dimension is capped at 8, so the
largest system operators are 64 x 64 (dilation environments may be
larger).  Monte-Carlo averages draw fixed-size chunks from per-chunk
spawned generator streams and accumulate in chunk order, so a result is
reproducible from its seed no matter how the chunks are scheduled.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadProbabilitiesError,
    BadSubsystemError,
    DesignUnavailableError,
    DimensionMismatchError,
    DomainError,
    NotRandomUnitaryError,
    ParamOutOfRangeError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MAX_LOCAL_DIM = 8
MC_CHUNK = 4096

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian trace-one PSD operator on a bipartite d_A x d_B space."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        d_a, d_b = self.dims
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (d_a * d_b, d_a * d_b):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match dims {self.dims}"
            )
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise DomainError(f"trace must be 1, got {np.trace(m):g}")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise DomainError("density matrix has an eigenvalue below -1e-10")
        m.flags.writeable = False
        object.__setattr__(self, "dims", (int(d_a), int(d_b)))
        object.__setattr__(self, "matrix", m)

    def reduced_a(self) -> np.ndarray:
        d_a, d_b = self.dims
        return np.einsum("ikjk->ij", self.matrix.reshape(d_a, d_b, d_a, d_b))

    def reduced_b(self) -> np.ndarray:
        d_a, d_b = self.dims
        return np.einsum("kikj->ij", self.matrix.reshape(d_a, d_b, d_a, d_b))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    diff = rho.matrix - sigma.matrix
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def random_density_matrix(dims: tuple[int, int], seed=0) -> DensityMatrix:
    """Ginibre-induced random state (defined for test and CLI seeding)."""
    rng = np.random.default_rng(seed)
    n = dims[0] * dims[1]
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return DensityMatrix(dims, m / np.trace(m).real)


# ---------------------------------------------------------------------------
# serialization: dims + row-major [re, im] pairs


def density_matrix_to_json(rho: DensityMatrix) -> dict:
    flat = rho.matrix.reshape(-1)
    return {
        "dims": [rho.dims[0], rho.dims[1]],
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def density_matrix_from_json(obj: dict) -> DensityMatrix:
    d_a, d_b = (int(x) for x in obj["dims"])
    n = d_a * d_b
    flat = np.array([complex(re, im) for re, im in obj["matrix"]])
    if flat.size != n * n:
        raise DimensionMismatchError(
            f"expected {n * n} entries for dims ({d_a}, {d_b}), got {flat.size}"
        )
    return DensityMatrix((d_a, d_b), flat.reshape(n, n))


# ---------------------------------------------------------------------------
# reference states


def max_entangled_vector(d: int) -> np.ndarray:
    """|psi> = sum_k |kk> / sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return v


def triplet_state() -> DensityMatrix:
    v = max_entangled_vector(2)
    return DensityMatrix((2, 2), np.outer(v, v.conj()))


def singlet_state() -> DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)
    return DensityMatrix((2, 2), np.outer(v, v.conj()))


def flip_operator(d: int) -> np.ndarray:
    """Swap V |a>|b> = |b>|a>."""
    v = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            v[b * d + a, a * d + b] = 1.0
    return v


def _check_local_dim(d: int):
    if not 2 <= d <= MAX_LOCAL_DIM:
        raise ParamOutOfRangeError(
            f"local dimension must lie in [2, {MAX_LOCAL_DIM}], got {d}"
        )


def werner_state(d: int, mu: float) -> DensityMatrix:
    """Flip-symmetric family (I + mu V)/(d^2 + d mu); NPT iff mu < -1/d."""
    _check_local_dim(d)
    if not -1.0 <= mu <= 1.0:
        raise ParamOutOfRangeError(f"need -1 <= mu <= 1, got {mu}")
    m = (np.eye(d * d, dtype=complex) + mu * flip_operator(d)) / (d * d + d * mu)
    return DensityMatrix((d, d), m)


def isotropic_state(d: int, gamma: float) -> DensityMatrix:
    """(1-gamma) I/d^2 + gamma |psi><psi|; NPT iff gamma > 1/(1+d)."""
    _check_local_dim(d)
    lo = -1.0 / (d * d - 1)
    if not lo <= gamma <= 1.0:
        raise ParamOutOfRangeError(f"need {lo:g} <= gamma <= 1, got {gamma}")
    v = max_entangled_vector(d)
    m = (1.0 - gamma) * np.eye(d * d, dtype=complex) / (d * d) \
        + gamma * np.outer(v, v.conj())
    return DensityMatrix((d, d), m)


def qubit_werner_state(gamma: float) -> DensityMatrix:
    """(1-gamma) I/4 + gamma |singlet><singlet|, -1/3 <= gamma <= 1."""
    if not -1.0 / 3.0 <= gamma <= 1.0:
        raise ParamOutOfRangeError(f"need -1/3 <= gamma <= 1, got {gamma}")
    m = (1.0 - gamma) * np.eye(4, dtype=complex) / 4.0 + gamma * singlet_state().matrix
    return DensityMatrix((2, 2), m)


def werner_mu_from_gamma(gamma: float) -> float:
    """Map the qubit form's gamma to the flip-form mu (gamma = -mu/(2+mu))."""
    return -2.0 * gamma / (1.0 + gamma)


# ---------------------------------------------------------------------------
# partial transpose and PPT


def _pt_matrix(m: np.ndarray, dims: tuple[int, int], subsystem: int) -> np.ndarray:
    d_a, d_b = dims
    t = m.reshape(d_a, d_b, d_a, d_b)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise BadSubsystemError(f"subsystem must be 0 or 1, got {subsystem}")
    return t.reshape(d_a * d_b, d_a * d_b)


def partial_transpose(rho: DensityMatrix, subsystem: int = 1) -> np.ndarray:
    """Transpose one subsystem; Hermitian but generally not PSD."""
    return _pt_matrix(rho.matrix, rho.dims, subsystem)


def pt_spectrum(rho: DensityMatrix, subsystem: int = 1) -> np.ndarray:
    return np.linalg.eigvalsh(partial_transpose(rho, subsystem))


def min_pt_eigenvalue(rho: DensityMatrix, subsystem: int = 1) -> float:
    return float(pt_spectrum(rho, subsystem)[0])


def is_ppt(rho: DensityMatrix, tol: float = PSD_TOL) -> bool:
    return min_pt_eigenvalue(rho) >= -tol


# ---------------------------------------------------------------------------
# Pauli channels


def _check_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
        raise BadProbabilitiesError(f"invalid probability vector {probs!r}")
    return np.clip(p, 0.0, None)


def pauli_channel(rho: DensityMatrix, probs) -> DensityMatrix:
    """Correlated Pauli map sum_k p_k (P_k x P_k) rho (P_k x P_k)^dag."""
    p = _check_probs(probs)
    if len(p) != 4 or rho.dims != (2, 2):
        raise BadProbabilitiesError("correlated Pauli channel needs 4 probs on 2x2")
    out = np.zeros_like(rho.matrix)
    for pk, pauli in zip(p, PAULIS):
        op = np.kron(pauli, pauli)
        out = out + pk * op @ rho.matrix @ op.conj().T
    return DensityMatrix(rho.dims, out)


def one_side_depolarize(rho: DensityMatrix, probs) -> DensityMatrix:
    """Marginal channel sum_k p_k (P_k x I) rho (P_k x I)^dag on mode A."""
    p = _check_probs(probs)
    if len(p) != 4 or rho.dims != (2, 2):
        raise BadProbabilitiesError("depolarizing channel needs 4 probs on 2x2")
    out = np.zeros_like(rho.matrix)
    for pk, pauli in zip(p, PAULIS):
        op = np.kron(pauli, PAULI_I)
        out = out + pk * op @ rho.matrix @ op.conj().T
    return DensityMatrix(rho.dims, out)


def depolarizing_is_eb(probs) -> bool:
    """Pauli depolarizing channel breaks entanglement iff max p_k <= 1/2."""
    return bool(np.max(_check_probs(probs)) <= 0.5 + 1e-12)


# ---------------------------------------------------------------------------
# Haar sampling and the single-qubit Clifford design


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def _haar_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d)))
    q, r = np.linalg.qr(z / math.sqrt(2))
    phases = r[:, range(d), range(d)].copy()
    phases /= np.abs(phases)
    return q * phases[:, None, :]


def _phase_canonical(u: np.ndarray) -> bytes:
    flat = u.reshape(-1)
    idx = int(np.argmax(np.abs(flat) > 1e-8))
    v = u * (flat[idx].conjugate() / abs(flat[idx]))
    # adding complex zero maps -0.0 to +0.0 in both components
    return (np.round(v, 10) + (0.0 + 0.0j)).tobytes()


@functools.lru_cache(maxsize=1)
def clifford_group_1q() -> tuple[np.ndarray, ...]:
    """The 24 single-qubit Cliffords (mod phase): a unitary 2-design."""
    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    phase = np.diag([1.0, 1j])
    elements: dict[bytes, np.ndarray] = {}
    frontier = [np.eye(2, dtype=complex)]
    while frontier:
        nxt = []
        for u in frontier:
            key = _phase_canonical(u)
            if key in elements:
                continue
            elements[key] = u
            nxt.extend((hadamard @ u, phase @ u))
        frontier = nxt
    group = tuple(elements[k] for k in sorted(elements))
    assert len(group) == 24, f"Clifford closure produced {len(group)} elements"
    return group


# ---------------------------------------------------------------------------
# twirling


def _twirl_matrix_design(m: np.ndarray, mode: str) -> np.ndarray:
    out = np.zeros_like(m, dtype=complex)
    group = clifford_group_1q()
    for u in group:
        v = u if mode == "uu" else u.conj()
        op = np.kron(u, v)
        out = out + op @ m @ op.conj().T
    return out / len(group)


def _chunk_slices(n: int):
    for start in range(0, n, MC_CHUNK):
        yield start // MC_CHUNK, start, min(start + MC_CHUNK, n)


def _twirl_matrix_haar(m: np.ndarray, d: int, mode: str, n_samples: int,
                       seed: int) -> np.ndarray:
    acc = np.zeros_like(m, dtype=complex)
    for chunk_idx, start, stop in _chunk_slices(n_samples):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(chunk_idx,))
        )
        u = _haar_batch(d, stop - start, rng)
        v = u if mode == "uu" else u.conj()
        ops = np.einsum("nab,ncd->nacbd", u, v).reshape(stop - start, d * d, d * d)
        acc = acc + np.einsum("nij,jk,nlk->il", ops, m, ops.conj())
    return acc / n_samples


def twirl(rho: DensityMatrix, mode: str = "uu", method: str = "design",
          n_samples: int = 100_000, seed: int = 0) -> DensityMatrix:
    """Average (U x V) rho (U x V)^dag over the unitary group, V = U or U*.

    method='design' evaluates the exact finite sum over the built-in
    single-qubit Clifford 2-design (d = 2 only); method='haar_mc' averages
    n_samples seeded Haar draws.
    """
    d_a, d_b = rho.dims
    if d_a != d_b:
        raise DimensionMismatchError(f"twirling needs d_A = d_B, got {rho.dims}")
    if mode not in ("uu", "uustar"):
        raise DomainError(f"mode must be 'uu' or 'uustar', got {mode!r}")
    if method == "design":
        if d_a != 2:
            raise DesignUnavailableError(
                f"built-in 2-design exists only for d = 2, got d = {d_a}"
            )
        out = _twirl_matrix_design(rho.matrix, mode)
    elif method in ("haar", "haar_mc"):
        _check_local_dim(d_a)
        out = _twirl_matrix_haar(rho.matrix, d_a, mode, n_samples, seed)
    else:
        raise DomainError(f"method must be 'design' or 'haar_mc', got {method!r}")
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(rho.dims, out)


def twirl_uustar_via_pt(rho: DensityMatrix, method: str = "design",
                        n_samples: int = 100_000, seed: int = 0) -> DensityMatrix:
    """U x U* twirl computed as PT o (U x U twirl) o PT.

    The partial transpose of rho is Hermitian but generally not a state,
    so the inner twirl runs on the raw matrix.
    """
    d_a, d_b = rho.dims
    if d_a != d_b:
        raise DimensionMismatchError(f"twirling needs d_A = d_B, got {rho.dims}")
    inner = _pt_matrix(rho.matrix, rho.dims, 1)
    if method == "design":
        if d_a != 2:
            raise DesignUnavailableError(
                f"built-in 2-design exists only for d = 2, got d = {d_a}"
            )
        tw = _twirl_matrix_design(inner, "uu")
    else:
        tw = _twirl_matrix_haar(inner, d_a, "uu", n_samples, seed)
    out = _pt_matrix(tw, rho.dims, 1)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(rho.dims, out)


def design_average(op: np.ndarray) -> np.ndarray:
    """Clifford-design average of U O U^dag; equals Tr(O)/2 * I."""
    group = clifford_group_1q()
    acc = np.zeros_like(op, dtype=complex)
    for u in group:
        acc = acc + u @ op @ u.conj().T
    return acc / len(group)


def partial_haar_average(op: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Haar average of (U x I) T (U^dag x I): (I/d_A) x Tr_A(T)."""
    d_a, d_b = dims
    t = np.asarray(op, dtype=complex).reshape(d_a, d_b, d_a, d_b)
    tr_a = np.einsum("ikil->kl", t)
    return np.kron(np.eye(d_a, dtype=complex) / d_a, tr_a)


def partial_haar_average_mc(op: np.ndarray, dims: tuple[int, int],
                            n_samples: int, seed: int = 0) -> np.ndarray:
    d_a, d_b = dims
    m = np.asarray(op, dtype=complex)
    acc = np.zeros_like(m)
    eye_b = np.eye(d_b, dtype=complex)
    for chunk_idx, start, stop in _chunk_slices(n_samples):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(chunk_idx,))
        )
        u = _haar_batch(d_a, stop - start, rng)
        ops = np.einsum("nab,cd->nacbd", u, eye_b).reshape(stop - start, d_a * d_b, -1)
        acc = acc + np.einsum("nij,jk,nlk->il", ops, m, ops.conj())
    return acc / n_samples


# ---------------------------------------------------------------------------
# control-unitary dilation of a correlated random-unitary channel


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Random-unitary pair channel sum_k p_k (U_k x V_k) . (U_k x V_k)^dag."""

    weights: np.ndarray
    unitaries_a: tuple[np.ndarray, ...]
    unitaries_b: tuple[np.ndarray, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        ua = tuple(np.asarray(u, dtype=complex) for u in self.unitaries_a)
        ub = tuple(np.asarray(u, dtype=complex) for u in self.unitaries_b)
        if not (len(w) == len(ua) == len(ub)) or len(w) == 0:
            raise NotRandomUnitaryError("weights and unitary lists must align")
        if np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-10:
            raise NotRandomUnitaryError("weights must be probabilities summing to 1")
        for u in (*ua, *ub):
            d = u.shape[0]
            if u.shape != (d, d) or np.max(np.abs(u.conj().T @ u - np.eye(d))) > 1e-10:
                raise NotRandomUnitaryError("every Kraus factor must be unitary")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "unitaries_a", ua)
        object.__setattr__(self, "unitaries_b", ub)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def dims(self) -> tuple[int, int]:
        return self.unitaries_a[0].shape[0], self.unitaries_b[0].shape[0]

    @property
    def kraus_ops(self) -> list[np.ndarray]:
        return [
            math.sqrt(p) * np.kron(ua, ub)
            for p, ua, ub in zip(self.weights, self.unitaries_a, self.unitaries_b)
        ]

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        out = np.zeros_like(m, dtype=complex)
        for p, ua, ub in zip(self.weights, self.unitaries_a, self.unitaries_b):
            op = np.kron(ua, ub)
            out = out + p * op @ m @ op.conj().T
        return out

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(rho.dims, self.apply_matrix(rho.matrix))


def correlated_pauli_channel(probs) -> KrausChannel:
    p = _check_probs(probs)
    if len(p) != 4:
        raise BadProbabilitiesError("correlated Pauli channel needs 4 probabilities")
    return KrausChannel(p, PAULIS, PAULIS)


def clifford_design_channel(mode: str = "uu") -> KrausChannel:
    group = clifford_group_1q()
    targets_b = group if mode == "uu" else tuple(u.conj() for u in group)
    w = np.full(len(group), 1.0 / len(group))
    return KrausChannel(w, group, targets_b)


@dataclass(frozen=True, eq=False)
class ControlDilation:
    """Classical environment state plus two control-unitary couplings."""

    env_state: DensityMatrix
    targets_a: tuple[np.ndarray, ...] = field(repr=False)
    targets_b: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def joint_unitary(self) -> np.ndarray:
        """W = sum_kl |k><k| x |l><l| x U_k x V_l on (E1, E2, A, B)."""
        k = len(self.targets_a)
        d_a = self.targets_a[0].shape[0]
        d_b = self.targets_b[0].shape[0]
        w = np.zeros((k, k, d_a * d_b, k, k, d_a * d_b), dtype=complex)
        for i, u in enumerate(self.targets_a):
            for j, v in enumerate(self.targets_b):
                w[i, j, :, i, j, :] = np.kron(u, v)
        n = k * k * d_a * d_b
        return w.reshape(n, n)


@dataclass(frozen=True)
class DilationReport:
    max_deviation: float
    zero_discord: bool
    passed: bool


def dilate_and_check(channel: KrausChannel, atol: float = 1e-12
                     ) -> tuple[ControlDilation, DilationReport]:
    """Build the control-unitary dilation and verify it reproduces the channel.

    The environment is prepared in the classical (diagonal, zero-discord)
    state sum_k p_k |kk><kk|; each system couples to its own environment
    qudit through a control unitary.  Tracing the environment out of
    W (rho_E x rho) W^dag must match the Kraus sum on a complete operator
    basis; the comparison runs over all d^2 matrix units.
    """
    k = channel.size
    d_a, d_b = channel.dims
    d_sys = d_a * d_b

    env = np.zeros((k * k, k * k), dtype=complex)
    diag_idx = [i * k + i for i in range(k)]
    for p, idx in zip(channel.weights, diag_idx):
        env[idx, idx] = p
    dilation = ControlDilation(
        env_state=DensityMatrix((k, k), env),
        targets_a=channel.unitaries_a,
        targets_b=channel.unitaries_b,
    )

    w = dilation.joint_unitary
    off_diag = env - np.diag(np.diag(env))
    zero_discord = bool(np.max(np.abs(off_diag)) == 0.0)

    max_dev = 0.0
    for a in range(d_sys):
        for b in range(d_sys):
            # rho_E x E_ab = sum_k p_k |k,k,a><k,k,b|; W maps basis vectors
            # to the corresponding columns, so the dilated output is a sum
            # of partial-traced outer products of columns of W.
            out_dilated = np.zeros((d_sys, d_sys), dtype=complex)
            for p, idx in zip(channel.weights, diag_idx):
                col_u = w[:, idx * d_sys + a].reshape(k * k, d_sys)
                col_v = w[:, idx * d_sys + b].reshape(k * k, d_sys)
                out_dilated += p * (col_u.T @ col_v.conj())
            unit = np.zeros((d_sys, d_sys), dtype=complex)
            unit[a, b] = 1.0
            out_kraus = channel.apply_matrix(unit)
            max_dev = max(max_dev, float(np.max(np.abs(out_dilated - out_kraus))))

    report = DilationReport(
        max_deviation=max_dev,
        zero_discord=zero_discord,
        passed=zero_discord and max_dev <= atol,
    )
    return dilation, report


# ---------------------------------------------------------------------------
# uniform number-basis dephasing (one-mode marginal of random rotations)


def fock_dephase(rho: DensityMatrix) -> DensityMatrix:
    """Kill all coherences of subsystem A: rho' = sum_k (P_k x I) rho (P_k x I).

    The output is a classical-quantum state, hence always PPT; applying
    the map twice equals applying it once.
    """
    d_a, d_b = rho.dims
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b).copy()
    for i in range(d_a):
        for j in range(d_a):
            if i != j:
                t[i, :, j, :] = 0.0
    return DensityMatrix(rho.dims, t.reshape(d_a * d_b, d_a * d_b))
