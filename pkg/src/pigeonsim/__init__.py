"""Statevector simulator and measurement-scheme harness for the quantum
pigeonhole effect."""

from ._kernels import active_backend
from .circuit import (
    Barrier,
    BranchOutcome,
    Circuit,
    Diagnostic,
    Gate,
    Instruction,
    Measure,
    ShotCounts,
    exact_result_json,
    run_exact,
    run_shots,
    shots_result_json,
    validate,
)
from .errors import (
    CapacityError,
    ImpossiblePostselectionError,
    InvalidCircuitError,
    InvalidInstructionError,
    ModelViolationError,
    PigeonSimError,
    QasmError,
    QasmSemanticError,
    QasmSyntaxError,
    UnsupportedGateError,
)
from .gates import ONE_QUBIT_GATES, GateKind
from .qasm import export_qasm, parse_qasm
from .qphe import (
    EXPECTED_PARITY,
    LABEL_KEYS,
    LABELS,
    PAIR_KEYS,
    PAIRS,
    EquivalenceReport,
    PairProjector,
    ParityTable,
    SchemeId,
    apply_pair_projector,
    branch_label,
    branch_parity,
    build_preselection,
    build_scheme_circuit,
    check_final_state_amplitudes,
    joint_distribution,
    parity_table,
    pigeonhole_overlap,
    postselect_mapping_report,
    scheme_equivalence_report,
)
from .statevector import (
    MAX_QUBITS,
    Statevector,
    apply_1q,
    apply_cx,
    build_product_state,
    inner_product,
    probability_of,
    project,
    renormalize,
    zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "active_backend",
    "MAX_QUBITS",
    "Statevector",
    "zero_state",
    "apply_1q",
    "apply_cx",
    "inner_product",
    "probability_of",
    "project",
    "renormalize",
    "build_product_state",
    "GateKind",
    "ONE_QUBIT_GATES",
    "Circuit",
    "Gate",
    "Measure",
    "Barrier",
    "Instruction",
    "Diagnostic",
    "BranchOutcome",
    "ShotCounts",
    "validate",
    "run_exact",
    "run_shots",
    "exact_result_json",
    "shots_result_json",
    "parse_qasm",
    "export_qasm",
    "SchemeId",
    "PairProjector",
    "ParityTable",
    "EquivalenceReport",
    "LABELS",
    "LABEL_KEYS",
    "PAIRS",
    "PAIR_KEYS",
    "EXPECTED_PARITY",
    "build_preselection",
    "apply_pair_projector",
    "pigeonhole_overlap",
    "build_scheme_circuit",
    "branch_label",
    "branch_parity",
    "joint_distribution",
    "parity_table",
    "scheme_equivalence_report",
    "check_final_state_amplitudes",
    "postselect_mapping_report",
    "PigeonSimError",
    "CapacityError",
    "InvalidInstructionError",
    "InvalidCircuitError",
    "ImpossiblePostselectionError",
    "ModelViolationError",
    "QasmError",
    "QasmSyntaxError",
    "QasmSemanticError",
    "UnsupportedGateError",
]
