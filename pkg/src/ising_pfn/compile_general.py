"""Ancilla-assisted simulation of the non-unitary teleport operators.

Outside the imaginary parameter domain the per-projection operators are
general linear maps.  Each one is simulated by a unitary block Q acting on
the wires plus one ancilla prepared and postselected in |0>:

* type I (vertex and horizontal-edge projections, single wire):
  M = sqrt(2) diag(x0, x1) and <0|_a Q |psi>|0>_a = H M |psi> / ||M|| with
  Q = H X^l CY(theta) X^l W.
* type II (vertical-edge projections, two wires):
  M = diag(x0+x1, x0-x1, x0-x1, x0+x1) and <0|_a Q |psi>|0>_a = M|psi>/||M||
  with Q = X_1^l CY_2a(-theta) CY_1a(theta) X_1^l W.

The indicator l and the rotation angle come from the moduli of the relevant
component pair directly (never via coth/tanh, whose poles at bJ in
{0, i pi/2, ...} are spurious).  Degenerate pairs (one vanishing component)
get theta = pi and a zero phase for the null component, which keeps outputs
deterministic.

Postselection costs ||M||/sqrt(2) per projection, so
Z = delta * <0...0|C|0...0> with delta = delta_o * prod ||M||/sqrt(2); the
product excludes the right-boundary vertices, whose projections are exact
unitaries (the readout rotations) and cost nothing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .compile_unitary import (
    Circuit,
    CompileError,
    Gate,
    a_gate_matrix,
    delta_o,
)
from .model import IsingInstance
from .simulator import StateVector, apply_gate

_SQ2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WeightedBra:
    """A normalized single-qubit bra x0 <0| + x1 <1|."""

    x0: complex
    x1: complex

    def __post_init__(self) -> None:
        nrm = abs(self.x0) ** 2 + abs(self.x1) ** 2
        if abs(nrm - 1.0) > 1e-12:
            raise CompileError(f"bra not normalized: |x0|^2+|x1|^2 = {nrm}")


def weighted_bra(z: complex) -> WeightedBra:
    """The parameter bra (e^z, e^-z)/sqrt(|e^z|^2 + |e^-z|^2).

    Computed from shifted exponentials so that any finite Re(z) is safe.
    """
    z = complex(z)
    re, im = z.real, z.imag
    if re >= 0:
        s0 = 1.0 / math.sqrt(1.0 + math.exp(min(-4.0 * re, 700.0)))
        s1 = math.exp(-2.0 * re) * s0 if re < 350 else 0.0
    else:
        s1 = 1.0 / math.sqrt(1.0 + math.exp(min(4.0 * re, 700.0)))
        s0 = math.exp(2.0 * re) * s1 if re > -350 else 0.0
    return WeightedBra(x0=s0 * cmath.exp(1j * im), x1=s1 * cmath.exp(-1j * im))


def fold_hadamard(bra: WeightedBra) -> WeightedBra:
    """The bra seen through a Hadamard: ((x0+x1), (x0-x1))/sqrt(2)."""
    return WeightedBra(x0=(bra.x0 + bra.x1) / _SQ2, x1=(bra.x0 - bra.x1) / _SQ2)


def _arg_or_zero(z: complex) -> float:
    # zero components get phase 0 by convention (any phase rides through a
    # vanishing singular value; fixing 0 keeps outputs deterministic)
    return cmath.phase(z) if abs(z) > 0.0 else 0.0


@dataclass(frozen=True)
class ProjectionSpec:
    """Indicator, rotation angle, norm and phases of one projection gadget."""

    kind: str  # "I" or "II"
    bra: WeightedBra
    l: int
    theta: float
    norm: float
    phases: tuple[float, float]

    def w_matrix(self) -> np.ndarray:
        p0, p1 = (cmath.exp(1j * p) for p in self.phases)
        if self.kind == "I":
            return np.diag([p0, p1]).astype(np.complex128)
        return np.diag([p0, p1, p1, p0]).astype(np.complex128)

    def d_matrix(self) -> np.ndarray:
        x0, x1 = self.bra.x0, self.bra.x1
        if self.kind == "I":
            return np.diag([_SQ2 * abs(x0), _SQ2 * abs(x1)]).astype(np.complex128)
        sp, sm = abs(x0 + x1), abs(x0 - x1)
        return np.diag([sp, sm, sm, sp]).astype(np.complex128)

    def m_matrix(self) -> np.ndarray:
        x0, x1 = self.bra.x0, self.bra.x1
        if self.kind == "I":
            return np.diag([_SQ2 * x0, _SQ2 * x1]).astype(np.complex128)
        return np.diag([x0 + x1, x0 - x1, x0 - x1, x0 + x1]).astype(np.complex128)

    def _w_is_identity(self) -> bool:
        return self.phases == (0.0, 0.0)

    def q_gates(self, wires: tuple[int, ...], ancilla: int) -> list[Gate]:
        """The unitary gadget, rightmost factor first; identity pieces are
        skipped so the unitary-domain circuits match the direct compiler
        gate for gate."""
        gates: list[Gate] = []
        if self.kind == "I":
            (w,) = wires
            if not self._w_is_identity():
                gates.append(Gate.phase_diag(w, *self.phases))
            if self.l:
                gates.append(Gate.x(w))
            if self.theta != 0.0:
                gates.append(Gate.cyrot(w, ancilla, self.theta))
            if self.l:
                gates.append(Gate.x(w))
            gates.append(Gate.h(w))
        else:
            w1, w2 = wires
            if not self._w_is_identity():
                gates.append(Gate.generic2q(w1, w2, self.w_matrix()))
            if self.l:
                gates.append(Gate.x(w1))
            if self.theta != 0.0:
                gates.append(Gate.cyrot(w1, ancilla, self.theta))
                gates.append(Gate.cyrot(w2, ancilla, -self.theta))
            if self.l:
                gates.append(Gate.x(w1))
        return gates


def type1_spec(bra: WeightedBra) -> ProjectionSpec:
    """Gadget data for a single-wire projection x0 <0| + x1 <1|."""
    a0, a1 = abs(bra.x0), abs(bra.x1)
    if a0 == 0.0 and a1 == 0.0:
        raise CompileError("bra has no support")
    l = 0 if a0 >= a1 else 1
    big, small = (a0, a1) if l == 0 else (a1, a0)
    theta = 2.0 * math.acos(min(small / big, 1.0))
    return ProjectionSpec(
        kind="I", bra=bra, l=l, theta=theta, norm=_SQ2 * big,
        phases=(_arg_or_zero(bra.x0), _arg_or_zero(bra.x1)))


def type2_spec(bra: WeightedBra) -> ProjectionSpec:
    """Gadget data for a two-wire projection (vertical edges, folded bra)."""
    sp, sm = bra.x0 + bra.x1, bra.x0 - bra.x1
    ap, am = abs(sp), abs(sm)
    l = 0 if ap >= am else 1
    big, small = (ap, am) if l == 0 else (am, ap)
    theta = 2.0 * math.acos(min(small / big, 1.0)) if big > 0 else math.pi
    return ProjectionSpec(
        kind="II", bra=bra, l=l, theta=theta, norm=big,
        phases=(_arg_or_zero(sp), _arg_or_zero(sm)))


# -- the projection sequence -----------------------------------------------


@dataclass(frozen=True)
class ProjectionSite:
    """One projection in compile order: which qubit(s) it drives and its spec."""

    label: tuple[str, int, int]
    wires: tuple[int, ...]
    spec: ProjectionSpec


def projection_sequence(inst: IsingInstance) -> Iterator[ProjectionSite]:
    """All projections left to right: per column the vertical edges first,
    then the vertices (except the right boundary), then the horizontal edges."""
    n, m = inst.n, inst.m
    for c in range(m):
        for r in range(n - 1):
            spec = type2_spec(fold_hadamard(weighted_bra(inst.jv[(r, c)])))
            yield ProjectionSite(("ev", r, c), (r, r + 1), spec)
        if c < m - 1:
            for r in range(n):
                spec = type1_spec(weighted_bra(inst.h[(r, c)]))
                yield ProjectionSite(("v", r, c), (r,), spec)
            for r in range(n):
                spec = type1_spec(fold_hadamard(weighted_bra(inst.jh[(r, c)])))
                yield ProjectionSite(("eh", r, c), (r,), spec)


def readout_matrices(inst: IsingInstance) -> list[np.ndarray]:
    """The right-boundary readout unitaries, one per wire."""
    return [a_gate_matrix(inst.h[(r, inst.m - 1)]) for r in range(inst.n)]


def delta_general(inst: IsingInstance) -> float:
    """delta = delta_o * prod ||M||/sqrt(2) over all simulated projections."""
    out = delta_o(inst)
    for site in projection_sequence(inst):
        out *= site.spec.norm / _SQ2
    return out


def compile_general(inst: IsingInstance) -> tuple[Circuit, float]:
    """The monolithic circuit on all 3nm-n-m qubits, plus its scale.

    Wires are qubits 0..n-1; each projection consumes the next fresh ancilla
    (allocated even when its gadget is empty, so the qubit count is always
    the decorated vertex count).  Z = delta * <0...0|C|0...0>.
    """
    n = inst.n
    gates: list[Gate] = [Gate.h(w) for w in range(n)]
    anc = n
    for site in projection_sequence(inst):
        gates.extend(site.spec.q_gates(site.wires, anc))
        anc += 1
    for r, mat in enumerate(readout_matrices(inst)):
        gates.append(Gate.generic1q(r, mat))
    delta = delta_general(inst)
    roles = {q: ("wire" if q < n else "ancilla") for q in range(anc)}
    circ = Circuit(num_qubits=anc, gates=tuple(gates), scale=delta, wire_roles=roles)
    assert anc == inst.num_decorated
    return circ, delta


# -- evaluation paths ---------------------------------------------------------


def evaluate_general(inst: IsingInstance) -> complex:
    """<0...0|C|0...0> via one reused scratch ancilla (memory 2^(n+1)).

    Each gadget block acts on the wires plus the scratch ancilla; projecting
    the ancilla to <0| (unnormalized) and zeroing the other half resets it
    for the next block.  Equality with the monolithic circuit is a tested
    invariant.
    """
    n = inst.n
    state = StateVector.zero_state(n + 1)
    for w in range(n):
        apply_gate(state, Gate.h(w))
    view = state.amps.reshape(2, -1)  # axis 0 is the scratch ancilla (qubit n)
    for site in projection_sequence(inst):
        for g in site.spec.q_gates(site.wires, n):
            apply_gate(state, g)
        view[1] = 0.0  # <0| on the ancilla, unnormalized, then reuse
    for r, mat in enumerate(readout_matrices(inst)):
        apply_gate(state, Gate.generic1q(r, mat))
    return complex(state.amps[0])


def apply_projection_direct(state: StateVector, spec: ProjectionSpec,
                            targets: tuple[int, ...]) -> StateVector:
    """Apply M/||M|| as a direct (generally non-unitary) linear map.

    This is the oracle path against which the ancilla gadgets are checked:
    the resulting unnormalized state equals the gadget's post-<0| state.
    """
    mat = spec.m_matrix() / spec.norm
    if spec.kind == "I":
        gate = Gate.generic1q(targets[0], mat)
    else:
        gate = Gate.generic2q(targets[0], targets[1], mat)
    return apply_gate(state, gate)


def evaluate_direct(inst: IsingInstance) -> complex:
    """<0...0|C|0...0> with every gadget replaced by its direct linear map."""
    n = inst.n
    state = StateVector.zero_state(n)
    for w in range(n):
        apply_gate(state, Gate.h(w))
    for site in projection_sequence(inst):
        apply_projection_direct(state, site.spec, site.wires)
        if site.spec.kind == "I":
            apply_gate(state, Gate.h(site.wires[0]))
    for r, mat in enumerate(readout_matrices(inst)):
        apply_gate(state, Gate.generic1q(r, mat))
    return complex(state.amps[0])


# -- the random-bond model ------------------------------------------------------


def random_bond_instance(n: int, m: int, beta: float, seed: int) -> IsingInstance:
    """The +-J model at inverse temperature beta with unit fields.

    h_a = 1 everywhere and J = +-1 with equal probability on every edge; the
    stored parameters are beta-multiplied as usual.
    """
    rng = np.random.default_rng(np.random.PCG64(seed))

    def sign() -> float:
        return 1.0 if rng.random() < 0.5 else -1.0

    return IsingInstance(
        n=n, m=m,
        h={(r, c): complex(beta) for r in range(n) for c in range(m)},
        jv={(r, c): complex(sign() * beta) for r in range(n - 1) for c in range(m)},
        jh={(r, c): complex(sign() * beta) for r in range(n) for c in range(m - 1)},
    )


def delta_random_bond(n: int, m: int, beta: float) -> float:
    """Closed-form scale of the random-bond model (signs drop out).

    delta = 2^{nm} e^{(2nm-n-m) beta} cosh(beta)^{nm-n} cosh(2 beta)^{n/2}.
    The power-of-two prefactor is re-derived numerically against the product
    formula in the test suite before being trusted here.
    """
    return (2.0 ** (n * m)
            * math.exp((2 * n * m - n - m) * beta)
            * math.cosh(beta) ** (n * m - n)
            * math.cosh(2.0 * beta) ** (n / 2.0))
