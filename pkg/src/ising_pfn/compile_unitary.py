"""Circuit types and the compilers for the unitary parameter domain.

Two routes from an instance to a ``<0|...|0>`` matrix element are built here:

* ``build_constant_depth``: the overlap route.  F prepares the decorated
  graph state (Hadamards then controlled-Z along every decorated edge) and A
  is a tensor product of single-qubit rotations encoding the parameters, with
  Z = delta_o * <0|A F|0> on all 3nm-n-m qubits.
* ``compile_problem1``: the teleportation route for instances whose fields
  and vertical couplings are purely imaginary and whose horizontal couplings
  are r + i(2k+1)pi/4.  The result is an n-wire circuit with
  Z = delta * <0|C|0> and an exponentially smaller scale delta.

Gate angle conventions: ZRot(t) = exp(-i t Z / 2), XRot(t) = exp(-i t X / 2),
PhaseDiag(p0, p1) = diag(e^{i p0}, e^{i p1}), ZZRot(c) = exp(c Z x Z) for a
complex c (unitary only when Re c = 0), CYRot(t) applies exp(-i t Y / 2) on
the target when the control (first qubit) is 1.  Two-qubit matrices are in
the basis |q[0] q[1]> with q[0] the high bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    DomainClass,
    IsingInstance,
    classify_domain,
    decorated_graph_structure,
    problem1_horizontal_parts,
)

_SQ2 = math.sqrt(2.0)
_ARITY = {
    "H": 1, "X": 1, "PhaseDiag": 1, "ZRot": 1, "XRot": 1, "Generic1Q": 1,
    "ZZRot": 2, "CZ": 2, "CYRot": 2, "Generic2Q": 2,
    "GlobalPhase": 0,
}


class CompileError(ValueError):
    """Raised for domain mismatches and size-guard violations."""


@dataclass(frozen=True)
class Gate:
    """A single gate: a kind tag, target qubits, and numeric parameters."""

    kind: str
    qubits: tuple[int, ...]
    params: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise CompileError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != _ARITY[self.kind]:
            raise CompileError(
                f"{self.kind} takes {_ARITY[self.kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CompileError(f"repeated qubit in {self.kind} on {self.qubits}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls("H", (q,))

    @classmethod
    def x(cls, q: int) -> "Gate":
        return cls("X", (q,))

    @classmethod
    def phase_diag(cls, q: int, p0: float, p1: float) -> "Gate":
        return cls("PhaseDiag", (q,), (float(p0), float(p1)))

    @classmethod
    def zrot(cls, q: int, theta: float) -> "Gate":
        return cls("ZRot", (q,), (float(theta),))

    @classmethod
    def xrot(cls, q: int, theta: float) -> "Gate":
        return cls("XRot", (q,), (float(theta),))

    @classmethod
    def zzrot(cls, a: int, b: int, c: complex) -> "Gate":
        return cls("ZZRot", (a, b), (complex(c),))

    @classmethod
    def cz(cls, a: int, b: int) -> "Gate":
        return cls("CZ", (a, b))

    @classmethod
    def cyrot(cls, control: int, target: int, theta: float) -> "Gate":
        return cls("CYRot", (control, target), (float(theta),))

    @classmethod
    def global_phase(cls, phi: float) -> "Gate":
        return cls("GlobalPhase", (), (float(phi),))

    @classmethod
    def generic1q(cls, q: int, matrix) -> "Gate":
        m = np.asarray(matrix, dtype=np.complex128).reshape(2, 2)
        return cls("Generic1Q", (q,), tuple(m.ravel()))

    @classmethod
    def generic2q(cls, a: int, b: int, matrix) -> "Gate":
        m = np.asarray(matrix, dtype=np.complex128).reshape(4, 4)
        return cls("Generic2Q", (a, b), tuple(m.ravel()))

    # -- matrices ---------------------------------------------------------

    def matrix(self) -> np.ndarray:
        """Dense matrix (2x2, 4x4, or 1x1 for GlobalPhase)."""
        k = self.kind
        if k == "H":
            return np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQ2
        if k == "X":
            return np.array([[0, 1], [1, 0]], dtype=np.complex128)
        if k == "PhaseDiag":
            p0, p1 = self.params
            return np.diag([cmath.exp(1j * p0), cmath.exp(1j * p1)])
        if k == "ZRot":
            (t,) = self.params
            return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])
        if k == "XRot":
            (t,) = self.params
            c, s = math.cos(t / 2), math.sin(t / 2)
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
        if k == "ZZRot":
            (z,) = self.params
            e, f = cmath.exp(z), cmath.exp(-z)
            return np.diag([e, f, f, e]).astype(np.complex128)
        if k == "CZ":
            return np.diag([1, 1, 1, -1]).astype(np.complex128)
        if k == "CYRot":
            (t,) = self.params
            c, s = math.cos(t / 2), math.sin(t / 2)
            out = np.eye(4, dtype=np.complex128)
            out[2:, 2:] = [[c, -s], [s, c]]
            return out
        if k == "GlobalPhase":
            (p,) = self.params
            return np.array([[cmath.exp(1j * p)]], dtype=np.complex128)
        if k == "Generic1Q":
            return np.array(self.params, dtype=np.complex128).reshape(2, 2)
        if k == "Generic2Q":
            return np.array(self.params, dtype=np.complex128).reshape(4, 4)
        raise CompileError(f"unknown gate kind {k!r}")

    def is_unitary(self, tol: float = 1e-12) -> bool:
        m = self.matrix()
        return bool(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= tol)


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over labeled qubits, carrying its scale."""

    num_qubits: int
    gates: tuple[Gate, ...]
    scale: float = 1.0
    wire_roles: dict[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise CompileError(f"gate {g.kind} touches qubit {q} >= {self.num_qubits}")
        if not self.wire_roles:
            object.__setattr__(
                self, "wire_roles", {q: "wire" for q in range(self.num_qubits)})

    def to_doc(self) -> dict:
        """JSON-ready document. Complex parameters flatten to [re, im] pairs."""
        gates = []
        for g in self.gates:
            params: list[float] = []
            for p in g.params:
                if isinstance(p, complex):
                    params.extend((p.real, p.imag))
                else:
                    params.append(float(p))
            gates.append({"kind": g.kind, "q": list(g.qubits), "params": params})
        return {"qubits": self.num_qubits, "scale": self.scale, "gates": gates}

    @classmethod
    def from_doc(cls, doc: dict) -> "Circuit":
        gates = []
        for g in doc["gates"]:
            kind, qubits, params = g["kind"], tuple(g["q"]), g["params"]
            if kind == "ZZRot":
                params = (complex(params[0], params[1]),)
            elif kind in ("Generic1Q", "Generic2Q"):
                vals = np.asarray(params, dtype=np.float64).reshape(-1, 2)
                params = tuple(vals[:, 0] + 1j * vals[:, 1])
            else:
                params = tuple(params)
            gates.append(Gate(kind, qubits, params))
        return cls(num_qubits=doc["qubits"], gates=tuple(gates), scale=doc["scale"])


# -- angles and scales --------------------------------------------------------


def xi_angle(r: float, k: int) -> float:
    """The angle xi in [-pi/2, pi/2] of the horizontal-edge teleport gate.

    Satisfies sin(xi) = (-1)^(k+1) e^{-r} / sqrt(2 cosh 2r); the equivalent
    form 1/sqrt(1 + e^{4r}) avoids overflow for any finite r.
    """
    if not math.isfinite(r):
        raise CompileError("r must be finite")
    mag = 1.0 / math.sqrt(1.0 + math.exp(min(4.0 * r, 700.0)))
    if 4.0 * r > 700.0:
        mag = math.exp(-2.0 * r)  # asymptotic tail, exp(4r) overflowed
    return math.asin(mag if (k + 1) % 2 == 0 else -mag)


def _sq_norm_factor(z: complex) -> float:
    """sqrt(|e^z|^2 + |e^-z|^2) = sqrt(2 cosh(2 Re z)), guarded for overflow."""
    re = z.real
    if abs(re) > 300.0:
        raise CompileError(f"parameter real part {re} too large (overflow guard at 300)")
    return math.sqrt(2.0 * math.cosh(2.0 * re))


def delta_o(inst: IsingInstance) -> float:
    """Scale of the constant-depth overlap route.

    2^{|V|/2} times the product of sqrt(|e^z|^2 + |e^-z|^2) over all vertex
    fields and edge couplings z.
    """
    out = 2.0 ** (inst.num_sites / 2.0)
    for z in (*inst.h.values(), *inst.jv.values(), *inst.jh.values()):
        out *= _sq_norm_factor(z)
    return out


def delta_problem1(inst: IsingInstance) -> float:
    """Scale of the compiled n-wire route: 2^{n(m+1)/2} prod sqrt(cosh 2r)."""
    if classify_domain(inst) not in (
            DomainClass.PROBLEM1, DomainClass.PROBLEM2, DomainClass.PROBLEM3):
        raise CompileError("delta_problem1 requires an imaginary-domain instance")
    out = 2.0 ** (inst.n * (inst.m + 1) / 2.0)
    for z in inst.jh.values():
        out *= math.sqrt(math.cosh(2.0 * z.real))
    return out


# -- compilers -----------------------------------------------------------------


def a_gate_matrix(z: complex) -> np.ndarray:
    """Unitary whose first row is (e^z, e^-z)/sqrt(2 cosh 2 Re z).

    Applied to |0> as a bra, it produces the parameter-weighted projection
    used by the overlap route, <0|A = (e^z <0| + e^-z <1|)/norm.
    """
    norm = _sq_norm_factor(z)
    e, f = cmath.exp(z), cmath.exp(-z)
    return np.array([[e, f], [f.conjugate(), -e.conjugate()]], dtype=np.complex128) / norm


def compile_problem1(inst: IsingInstance, readout: str = "cancel") -> Circuit:
    """Compile an imaginary-domain instance to an n-wire circuit.

    Gate order per column c: the vertical-edge exp(bJ Z x Z) gates (ascending
    row; all same-column ZZ gates commute), then the vertex H exp(bh Z) gates
    on every wire, then, between columns, the horizontal-edge teleport gates
    exp(i(2k+1)pi/4) H exp(i xi Z).  Vertex gates are emitted for every column
    including the last: the readout projections supply exactly the matrices
    that complete the final column's teleport gates, so no separate readout
    gates appear.  All phases exp(i(2k+1)pi/4) accumulate into a single
    GlobalPhase gate.

    ``readout="invert"`` is a debugging mode that additionally emits the
    adjoint of each final-column vertex gate followed by the equivalent
    readout unitary; the amplitude is identical.
    """
    domain = classify_domain(inst)
    if domain not in (DomainClass.PROBLEM1, DomainClass.PROBLEM2, DomainClass.PROBLEM3):
        raise CompileError(f"compile_problem1 needs an imaginary-domain instance, got {domain}")
    if readout not in ("cancel", "invert"):
        raise CompileError(f"unknown readout mode {readout!r}")

    n, m = inst.n, inst.m
    gates: list[Gate] = [Gate.h(w) for w in range(n)]
    phase = 0.0
    for c in range(m):
        for r in range(n - 1):
            z = inst.jv[(r, c)]
            if z != 0:
                gates.append(Gate.zzrot(r, r + 1, z))
        for r in range(n):
            phi = inst.h[(r, c)].imag
            if phi != 0.0:
                gates.append(Gate.zrot(r, -2.0 * phi))
            gates.append(Gate.h(r))
        if c < m - 1:
            for r in range(n):
                parts = problem1_horizontal_parts(inst.jh[(r, c)])
                if parts is None:
                    raise CompileError(f"horizontal coupling at ({r},{c}) not r + i(2k+1)pi/4")
                rr, k = parts
                xi = xi_angle(rr, k)
                gates.append(Gate.zrot(r, -2.0 * xi))
                gates.append(Gate.h(r))
                phase += (2 * k + 1) * math.pi / 4.0
    if readout == "invert":
        # undo the final column's vertex gates, then apply the readout
        # unitaries explicitly; cancels back to the default circuit
        for r in range(n):
            phi = inst.h[(r, m - 1)].imag
            gates.append(Gate.h(r))
            if phi != 0.0:
                gates.append(Gate.zrot(r, 2.0 * phi))
            gates.append(Gate.generic1q(r, a_gate_matrix(inst.h[(r, m - 1)])))
    phase = math.fmod(phase, 2.0 * math.pi)
    if phase != 0.0:
        gates.insert(n, Gate.global_phase(phase))
    return Circuit(num_qubits=n, gates=tuple(gates), scale=delta_problem1(inst))


def build_constant_depth(inst: IsingInstance, max_qubits: int = 24) -> Circuit:
    """The constant-depth circuit A F on all decorated-graph qubits.

    F = Hadamard everywhere then CZ along each decorated edge; A applies, per
    edge qubit, a Hadamard followed by the edge rotation, and per vertex qubit
    the field rotation.  Z = delta_o * <0...0| A F |0...0>.
    """
    verts, edges = decorated_graph_structure(inst.n, inst.m)
    if len(verts) > max_qubits:
        raise CompileError(f"{len(verts)} qubits exceeds the state-vector bound {max_qubits}")
    index = {v: i for i, v in enumerate(verts)}
    gates: list[Gate] = [Gate.h(i) for i in range(len(verts))]
    gates.extend(Gate.cz(index[a], index[b]) for a, b in edges)
    for v in verts:
        kind, r, c = v
        if kind == "v":
            z = inst.h[(r, c)]
        else:
            gates.append(Gate.h(index[v]))
            z = inst.jv[(r, c)] if kind == "ev" else inst.jh[(r, c)]
        gates.append(Gate.generic1q(index[v], a_gate_matrix(z)))
    roles = {i: ("wire" if v[0] == "v" else "ancilla") for v, i in index.items()}
    return Circuit(num_qubits=len(verts), gates=tuple(gates),
                   scale=delta_o(inst), wire_roles=roles)
