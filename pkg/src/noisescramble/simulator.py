"""Dense density-matrix simulation of noisy circuits.

Gates are applied as small-matrix tensor contractions on a rank-2N view of
the density matrix, which keeps a 10-qubit, multi-thousand-gate sweep in
the seconds-to-minutes range without any sparse machinery. Noise is a
fixed policy: after each ideal gate, an independent single-qubit
depolarising channel acts on every support qubit at a rate chosen so the
probability that the whole gate is error-free is exactly 1 - epsilon.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidGateError,
    InvalidRateError,
    InvalidStateError,
    ShapeError,
)
from .hamiltonians import PAULI_MATRICES, PauliString

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

# Re-symmetrise the evolving matrix this often to suppress float drift.
_RESYMMETRISE_EVERY = 100


@dataclass(frozen=True)
class Gate:
    """One circuit element: a rotation, Hadamard, CNOT or Pauli-string exponential.

    ``qubits`` lists the support in the order the gate matrix expects it;
    for a CNOT that is (control, target), for a Pauli exponential the
    non-identity positions of the generator in ascending order.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    pauli: str | None = None

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidGateError(f"repeated qubit in support {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidGateError(f"negative qubit index in {self.qubits}")
        if self.angle is not None and not math.isfinite(self.angle):
            raise InvalidGateError(f"non-finite angle {self.angle!r}")

    @classmethod
    def rotation_x(cls, qubit: int, angle: float) -> "Gate":
        return cls("rx", (int(qubit),), float(angle))

    @classmethod
    def rotation_y(cls, qubit: int, angle: float) -> "Gate":
        return cls("ry", (int(qubit),), float(angle))

    @classmethod
    def rotation_z(cls, qubit: int, angle: float) -> "Gate":
        return cls("rz", (int(qubit),), float(angle))

    @classmethod
    def hadamard(cls, qubit: int) -> "Gate":
        return cls("h", (int(qubit),))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        if control == target:
            raise InvalidGateError("CNOT control and target must differ")
        return cls("cnot", (int(control), int(target)))

    @classmethod
    def pauli_exponential(cls, pauli, angle: float) -> "Gate":
        """exp(-i * angle * P) for a Pauli string P (full angle, no half)."""
        ops = pauli.ops if isinstance(pauli, PauliString) else str(pauli)
        ops = PauliString(ops).ops
        support = tuple(i for i, c in enumerate(ops) if c != "I")
        if not support:
            raise InvalidGateError("identity Pauli string generates only a global phase")
        return cls("pauli_exp", support, float(angle), "".join(ops[i] for i in support))

    def matrix(self) -> np.ndarray:
        """Unitary on the support qubits, dimension 2^len(qubits)."""
        if self.kind == "rx":
            c, s = np.cos(self.angle / 2), np.sin(self.angle / 2)
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == "ry":
            c, s = np.cos(self.angle / 2), np.sin(self.angle / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "rz":
            phase = np.exp(-0.5j * self.angle)
            return np.array([[phase, 0], [0, np.conj(phase)]], dtype=complex)
        if self.kind == "h":
            return _HADAMARD.copy()
        if self.kind == "cnot":
            return _CNOT.copy()
        if self.kind == "pauli_exp":
            pauli_mat = PauliString(self.pauli).matrix()
            dim = pauli_mat.shape[0]
            return np.cos(self.angle) * np.eye(dim) - 1j * np.sin(self.angle) * pauli_mat
        raise InvalidGateError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class NoiseSpec:
    """Per-gate depolarising error budget.

    ``per_gate_error`` is the probability that a gate suffers any error.
    It is split across the q support qubits as independent single-qubit
    error events at rate eps_q = 1 - (1 - eps)^(1/q), which makes the
    per-gate no-error probability exactly 1 - eps. An error event applies
    one of X, Y, Z uniformly at random; as a channel that is the
    partial-replace map at rate 4 eps_q / 3 (full replacement by Id/2
    happens at eps_q = 3/4, beyond which the channel over-rotates towards
    the uniform Pauli mixture).
    """

    per_gate_error: float = 0.0

    def __post_init__(self):
        eps = self.per_gate_error
        if not (math.isfinite(eps) and 0.0 <= eps <= 1.0):
            raise InvalidRateError(f"per-gate error {eps!r} outside [0, 1]")

    def per_qubit_error_rate(self, n_support: int) -> float:
        """Probability that one support qubit suffers an X, Y or Z error."""
        eps = self.per_gate_error
        if eps == 0.0:
            return 0.0
        if eps == 1.0:
            return 1.0
        return -math.expm1(math.log1p(-eps) / n_support)

    def per_qubit_replace_rate(self, n_support: int) -> float:
        """The equivalent partial-replace rate, 4/3 of the error rate."""
        return 4.0 * self.per_qubit_error_rate(n_support) / 3.0


@dataclass(frozen=True)
class CircuitProgram:
    """An ordered gate list plus its noise annotation.

    Every gate counts once towards the gate count, including state
    preparation rotations emitted by the ansatz builders.
    """

    n_qubits: int
    gates: tuple[Gate, ...]
    noise: NoiseSpec = NoiseSpec(0.0)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidGateError(f"need at least 1 qubit, got {self.n_qubits}")
        for gate in self.gates:
            if max(gate.qubits) >= self.n_qubits:
                raise InvalidGateError(
                    f"gate {gate.kind} on {gate.qubits} exceeds {self.n_qubits} qubits"
                )

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def with_noise(self, per_gate_error: float) -> "CircuitProgram":
        return dataclasses.replace(self, noise=NoiseSpec(per_gate_error))


@dataclass(frozen=True)
class DensityMatrix:
    """Dense Hermitian unit-trace matrix of a (possibly mixed) N-qubit state."""

    n_qubits: int
    data: np.ndarray

    def __post_init__(self):
        d = 2**self.n_qubits
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (d, d):
            raise ShapeError(f"expected shape {(d, d)}, got {data.shape}")
        object.__setattr__(self, "data", data)
        if np.abs(data - data.conj().T).max() > 1e-12:
            raise InvalidStateError("matrix is not Hermitian within 1e-12")
        if abs(np.trace(data).real - 1.0) > 1e-10 or abs(np.trace(data).imag) > 1e-10:
            raise InvalidStateError(f"trace {np.trace(data)!r} differs from 1 beyond 1e-10")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def basis_state(cls, n_qubits: int, index: int = 0) -> "DensityMatrix":
        d = 2**n_qubits
        data = np.zeros((d, d), dtype=complex)
        data[index, index] = 1.0
        return cls(n_qubits, data)

    @classmethod
    def from_statevector(cls, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        n = int(round(np.log2(psi.size)))
        if 2**n != psi.size:
            raise ShapeError(f"state vector length {psi.size} is not a power of two")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
            raise InvalidStateError("state vector is not normalised within 1e-10")
        return cls(n, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 2**n_qubits
        return cls(n_qubits, np.eye(d, dtype=complex) / d)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.data)[0])

    def validate_psd(self, tol: float = 1e-10) -> None:
        smallest = self.min_eigenvalue()
        if smallest < -tol:
            raise InvalidStateError(f"smallest eigenvalue {smallest:.3e} below -{tol:.0e}")


def _apply_matrix(tensor: np.ndarray, mat: np.ndarray, axes) -> np.ndarray:
    """Contract a 2^k x 2^k matrix into the given k axes of a qubit tensor."""
    k = len(axes)
    mat_t = mat.reshape((2,) * (2 * k))
    out = np.tensordot(mat_t, tensor, axes=(tuple(range(k, 2 * k)), tuple(axes)))
    return np.moveaxis(out, tuple(range(k)), tuple(axes))


def _depolarise_tensor(tensor: np.ndarray, qubit: int, n: int, p: float) -> np.ndarray:
    """Partial-replace channel on one (row, column) axis pair.

    rho -> (1 - p) rho + p (tr_q rho) (x) Id/2. Valid (CPTP) for
    p in [0, 4/3]; p above 1 realises the uniform-Pauli error channel.
    """
    t = np.moveaxis(tensor, (qubit, n + qubit), (0, 1))
    out = t.copy()
    avg = 0.5 * (t[0, 0] + t[1, 1])
    out[0, 0] = (1.0 - p) * t[0, 0] + p * avg
    out[1, 1] = (1.0 - p) * t[1, 1] + p * avg
    out[0, 1] = (1.0 - p) * t[0, 1]
    out[1, 0] = (1.0 - p) * t[1, 0]
    return np.moveaxis(out, (0, 1), (qubit, n + qubit))


def _check_support(gate: Gate, n_qubits: int) -> None:
    if max(gate.qubits) >= n_qubits:
        raise InvalidGateError(
            f"gate {gate.kind} on {gate.qubits} exceeds {n_qubits} qubits"
        )


def apply_unitary(state: DensityMatrix, gate: Gate) -> DensityMatrix:
    """Return U rho U^dagger for the gate's unitary embedded on its support."""
    n = state.n_qubits
    _check_support(gate, n)
    mat = gate.matrix()
    t = state.data.reshape((2,) * (2 * n))
    t = _apply_matrix(t, mat, gate.qubits)
    t = _apply_matrix(t, mat.conj(), tuple(n + q for q in gate.qubits))
    return DensityMatrix(n, np.reshape(t, (state.dim, state.dim)))


def apply_depolarising(state: DensityMatrix, qubit: int, rate: float) -> DensityMatrix:
    """Mix the state on one qubit with the maximally mixed qubit state.

    rho -> (1 - p) rho + p (tr_q rho) (x) Id/2, re-embedded at the qubit.
    """
    if not (math.isfinite(rate) and 0.0 <= rate <= 1.0):
        raise InvalidRateError(f"depolarising rate {rate!r} outside [0, 1]")
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise InvalidGateError(f"qubit {qubit} out of range for {n} qubits")
    t = state.data.reshape((2,) * (2 * n))
    t = _depolarise_tensor(t, qubit, n, rate)
    return DensityMatrix(n, np.reshape(t, (state.dim, state.dim)))


def _resymmetrise(tensor: np.ndarray, d: int, n: int) -> np.ndarray:
    m = np.ascontiguousarray(tensor).reshape(d, d)
    m = 0.5 * (m + m.conj().T)
    return m.reshape((2,) * (2 * n))


def run_circuit(program: CircuitProgram, initial: DensityMatrix) -> DensityMatrix:
    """Evolve a density matrix through the program's noisy gates in order.

    Each gate applies its ideal unitary; every support qubit then suffers
    an independent uniform X/Y/Z error with probability
    1 - (1 - eps)^(1/q), so the whole gate is error-free with probability
    exactly 1 - eps. With a zero error rate the output is the ideal
    (generally pure) state.
    """
    if program.n_qubits != initial.n_qubits:
        raise ShapeError(
            f"program has {program.n_qubits} qubits, state has {initial.n_qubits}"
        )
    n = program.n_qubits
    d = initial.dim
    eps = program.noise.per_gate_error
    t = np.array(initial.data, dtype=complex).reshape((2,) * (2 * n))
    for count, gate in enumerate(program.gates, start=1):
        mat = gate.matrix()
        t = _apply_matrix(t, mat, gate.qubits)
        t = _apply_matrix(t, mat.conj(), tuple(n + q for q in gate.qubits))
        if eps > 0.0:
            p = program.noise.per_qubit_replace_rate(len(gate.qubits))
            for q in gate.qubits:
                t = _depolarise_tensor(t, q, n, p)
        if count % _RESYMMETRISE_EVERY == 0:
            t = _resymmetrise(t, d, n)
    m = np.ascontiguousarray(t).reshape(d, d)
    return DensityMatrix(n, 0.5 * (m + m.conj().T))


def run_ideal(program: CircuitProgram, initial: np.ndarray) -> np.ndarray:
    """Noise-free state-vector simulation of the same gate sequence."""
    psi = np.asarray(initial, dtype=complex).reshape(-1)
    n = program.n_qubits
    if psi.size != 2**n:
        raise ShapeError(f"state has dimension {psi.size}, program expects {2**n}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise InvalidStateError("initial state vector is not normalised within 1e-10")
    t = psi.reshape((2,) * n)
    for gate in program.gates:
        k = len(gate.qubits)
        mat_t = gate.matrix().reshape((2,) * (2 * k))
        t = np.tensordot(mat_t, t, axes=(tuple(range(k, 2 * k)), gate.qubits))
        t = np.moveaxis(t, tuple(range(k)), gate.qubits)
    return np.reshape(t, -1)


def basis_statevector(n_qubits: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi
