"""Dense state-vector engine and the sampling estimator.

Bit-order convention: qubit 0 is the least significant bit of the amplitude
index, so in the reshaped ``[2]*k`` view qubit q lives on axis k-1-q.
Diagonal gate kinds touch each amplitude exactly once; general one- and
two-qubit kinds use tensordot over the target axes.

The estimator simulates the single-ancilla interference circuit exactly
(every gate promoted structurally to its controlled version by acting on the
ancilla=1 half of the state), reads off p0 = (1 + Re<0|U|0>)/2 and the
corresponding imaginary-part probability, then draws Bernoulli samples from a
seeded PCG64 generator, so estimates are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compile_unitary import Circuit, Gate

_MAX_QUBITS = 26
_UNITARY_TOL = 1e-12


@dataclass
class StateVector:
    """Dense amplitudes over 2^k basis states, plus accumulated rescaling.

    ``norm_factor`` tracks explicit non-unitary rescalings applied by callers
    (unnormalized projections keep amplitudes as they are and leave it at 1).
    """

    num_qubits: int
    amps: np.ndarray
    norm_factor: float = 1.0

    @classmethod
    def zero_state(cls, num_qubits: int) -> "StateVector":
        if num_qubits > _MAX_QUBITS:
            raise ValueError(f"too many qubits ({num_qubits} > {_MAX_QUBITS})")
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits=num_qubits, amps=amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


def _axis(num_qubits: int, q: int) -> int:
    return num_qubits - 1 - q


def _apply_1q(amps: np.ndarray, num_qubits: int, mat: np.ndarray, q: int) -> np.ndarray:
    t = amps.reshape([2] * num_qubits)
    ax = _axis(num_qubits, q)
    t = np.moveaxis(np.tensordot(mat, t, axes=([1], [ax])), 0, ax)
    return np.ascontiguousarray(t).reshape(-1)


def _apply_2q(amps: np.ndarray, num_qubits: int, mat: np.ndarray, qa: int, qb: int) -> np.ndarray:
    # mat is 4x4 in the basis |qa qb> with qa the high bit
    t = amps.reshape([2] * num_qubits)
    axa, axb = _axis(num_qubits, qa), _axis(num_qubits, qb)
    m = mat.reshape(2, 2, 2, 2)  # [a_out, b_out, a_in, b_in]
    t = np.tensordot(m, t, axes=([2, 3], [axa, axb]))
    t = np.moveaxis(t, (0, 1), (axa, axb))
    return np.ascontiguousarray(t).reshape(-1)


def _slice(num_qubits: int, spec: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * num_qubits
    for q, bit in spec.items():
        idx[_axis(num_qubits, q)] = bit
    return tuple(idx)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place and return the state."""
    k = state.num_qubits
    kind = gate.kind
    if kind == "GlobalPhase":
        state.amps *= np.exp(1j * gate.params[0])
        return state
    if kind in ("PhaseDiag", "ZRot"):
        (q,) = gate.qubits
        m = gate.matrix()
        view = state.amps.reshape([2] * k)
        view[_slice(k, {q: 0})] *= m[0, 0]
        view[_slice(k, {q: 1})] *= m[1, 1]
        return state
    if kind == "CZ":
        a, b = gate.qubits
        view = state.amps.reshape([2] * k)
        view[_slice(k, {a: 1, b: 1})] *= -1.0
        return state
    if kind == "ZZRot":
        a, b = gate.qubits
        (z,) = gate.params
        e, f = np.exp(z), np.exp(-z)
        view = state.amps.reshape([2] * k)
        view[_slice(k, {a: 0, b: 0})] *= e
        view[_slice(k, {a: 1, b: 1})] *= e
        view[_slice(k, {a: 0, b: 1})] *= f
        view[_slice(k, {a: 1, b: 0})] *= f
        return state
    if kind == "CYRot":
        ctrl, targ = gate.qubits
        m = gate.matrix()[2:, 2:]
        view = state.amps.reshape([2] * k)
        sub = view[_slice(k, {ctrl: 1})]
        # target axis within the control=1 slice: axes above the control
        # axis shift down by one once the control axis is indexed away
        ax = _axis(k, targ) if targ > ctrl else _axis(k, targ) - 1
        view[_slice(k, {ctrl: 1})] = np.moveaxis(
            np.tensordot(m, sub, axes=([1], [ax])), 0, ax)
        return state
    if kind in ("H", "X", "XRot", "Generic1Q"):
        state.amps = _apply_1q(state.amps, k, gate.matrix(), gate.qubits[0])
        return state
    if kind == "Generic2Q":
        state.amps = _apply_2q(state.amps, k, gate.matrix(), *gate.qubits)
        return state
    raise ValueError(f"unknown gate kind {kind!r}")


def simulate_circuit(circ: Circuit, state: StateVector | None = None) -> StateVector:
    """Run a circuit from |0...0> (or a caller-supplied state)."""
    if state is None:
        state = StateVector.zero_state(circ.num_qubits)
    for g in circ.gates:
        apply_gate(state, g)
    return state


def run_circuit(circ: Circuit) -> complex:
    """The matrix element <0...0|C|0...0> (times any norm factor)."""
    state = simulate_circuit(circ)
    return complex(state.amps[0]) * state.norm_factor


# -- interference-test estimator ----------------------------------------------


@dataclass(frozen=True)
class HadamardEstimate:
    """Sampled estimate of Re and Im of <0|U|0> with its 1/sqrt(N) bound."""

    re: float
    im: float
    samples: int
    seed: int
    stderr_bound: float


def _require_unitary(circ: Circuit) -> None:
    for g in circ.gates:
        if not g.is_unitary(_UNITARY_TOL):
            raise ValueError(f"non-unitary gate {g.kind} in circuit")


def _controlled_p0(circ: Circuit, imaginary: bool) -> float:
    """p(ancilla=0) for the interference circuit, simulated exactly.

    The ancilla is the extra top qubit; each gate is promoted structurally to
    its controlled version by acting on the ancilla=1 half of the state (this
    also turns GlobalPhase into the required controlled phase).
    """
    k = circ.num_qubits
    if k + 1 > _MAX_QUBITS:
        raise ValueError("controlled circuit exceeds the qubit bound")
    lower = np.zeros(1 << k, dtype=np.complex128)
    lower[0] = 1.0 / np.sqrt(2.0)  # ancilla Hadamard on |0>|0...0>
    half = StateVector(num_qubits=k, amps=lower.copy())
    for g in circ.gates:
        apply_gate(half, g)
    upper = half.amps
    if imaginary:
        upper = upper * -1j  # S-dagger on the ancilla
    merged = (lower + upper) / np.sqrt(2.0)  # final ancilla Hadamard
    return float(np.vdot(merged, merged).real)


def hadamard_test(circ: Circuit, samples: int, seed: int) -> HadamardEstimate:
    """Estimate <0|U|0> from Bernoulli samples of the interference circuits.

    p0 = (1 + Re<0|U|0>)/2 for the plain circuit and (1 + Im<0|U|0>)/2 for
    the variant with S-dagger on the ancilla; the estimate is 2 #zeros/N - 1
    for each.  Requires a unitary-only circuit with norm factor 1.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    _require_unitary(circ)
    p_re = min(max(_controlled_p0(circ, imaginary=False), 0.0), 1.0)
    p_im = min(max(_controlled_p0(circ, imaginary=True), 0.0), 1.0)
    rng = np.random.Generator(np.random.PCG64(seed))
    zeros_re = int(np.count_nonzero(rng.random(samples) < p_re))
    zeros_im = int(np.count_nonzero(rng.random(samples) < p_im))
    return HadamardEstimate(
        re=2.0 * zeros_re / samples - 1.0,
        im=2.0 * zeros_im / samples - 1.0,
        samples=samples,
        seed=seed,
        stderr_bound=1.0 / np.sqrt(samples),
    )
