"""Ising partition functions on square lattices as circuit amplitudes.

The package ties together exact oracles (`oracle`), the two circuit
compilers (`compile_unitary`, `compile_general`), a dense state-vector
simulator (`simulator`), graph-state machinery with the brickwork embedding
(`mbqc`), the commuting-circuit rewrite (`iqp`), and a command-line front
end (`cli`).
"""

from .model import (
    OMEGA,
    DomainClass,
    IsingInstance,
    ModelError,
    classify_domain,
    energy,
    parse_instance,
    random_instance,
    serialize_instance,
)
from .oracle import ExactResult, brute_force_Z, free_energy_report, transfer_matrix_Z
from .compile_unitary import (
    Circuit,
    CompileError,
    Gate,
    build_constant_depth,
    compile_problem1,
    delta_o,
    delta_problem1,
    xi_angle,
)
from .compile_general import (
    ProjectionSpec,
    WeightedBra,
    compile_general,
    delta_general,
    delta_random_bond,
    evaluate_direct,
    evaluate_general,
    fold_hadamard,
    type1_spec,
    type2_spec,
    weighted_bra,
)
from .simulator import HadamardEstimate, StateVector, apply_gate, hadamard_test, run_circuit

__all__ = [
    "OMEGA",
    "DomainClass",
    "IsingInstance",
    "ModelError",
    "classify_domain",
    "energy",
    "parse_instance",
    "random_instance",
    "serialize_instance",
    "ExactResult",
    "brute_force_Z",
    "free_energy_report",
    "transfer_matrix_Z",
    "Circuit",
    "CompileError",
    "Gate",
    "build_constant_depth",
    "compile_problem1",
    "delta_o",
    "delta_problem1",
    "xi_angle",
    "ProjectionSpec",
    "WeightedBra",
    "compile_general",
    "delta_general",
    "delta_random_bond",
    "evaluate_direct",
    "evaluate_general",
    "fold_hadamard",
    "type1_spec",
    "type2_spec",
    "weighted_bra",
    "HadamardEstimate",
    "StateVector",
    "apply_gate",
    "hadamard_test",
    "run_circuit",
]

__version__ = "0.1.0"
