"""Circuit IR and the two execution modes.

A circuit is a flat list of instructions over ``num_qubits`` qubits and
``num_clbits`` classical bits.  Gates may carry a classical condition
``(clbit, value)``; unwritten clbits read 0.  Classical bit strings are
printed most-significant clbit first, matching the amplitude index order.

``run_exact`` enumerates every measurement branch with its exact
probability; ``run_shots`` samples.  Sampling is reproducible by contract:
shot ``i`` draws from a Philox stream keyed ``(seed, i)`` and the j-th
measurement of the shot consumes the j-th double of that stream, so results
do not depend on the kernel backend or on how shots are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _kernels as _impl
from ._kernels import OP_CX, OP_H, OP_MEASURE, OP_S, OP_SDG, OP_X, OP_Z
from .errors import CapacityError, InvalidCircuitError
from .gates import ONE_QUBIT_GATES, GateKind
from .statevector import Statevector, zero_state

# Branch enumeration caps: at most 2^20 branches, and conditional branch
# probabilities below PRUNE_EPS (relative to the parent) are dropped.
MAX_EXACT_MEASURES = 20
PRUNE_EPS = 1e-12

_OPCODE = {
    GateKind.H: OP_H,
    GateKind.S: OP_S,
    GateKind.SDG: OP_SDG,
    GateKind.X: OP_X,
    GateKind.Z: OP_Z,
    GateKind.CX: OP_CX,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    condition: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Measure:
    qubit: int
    clbit: int


@dataclass(frozen=True)
class Barrier:
    """Annotation only; has no effect on execution."""


Instruction = Union[Gate, Measure, Barrier]


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding. ``index`` is the instruction position, or -1
    for circuit-level problems."""

    index: int
    message: str

    def __str__(self) -> str:
        if self.index < 0:
            return self.message
        return f"instruction {self.index}: {self.message}"


class Circuit:
    def __init__(self, num_qubits: int, num_clbits: int = 0, name: str = "circuit"):
        self.num_qubits = int(num_qubits)
        self.num_clbits = int(num_clbits)
        self.name = name
        self.instructions: list[Instruction] = []

    # -- builder helpers ----------------------------------------------------

    def _gate(self, kind, qubits, cond):
        self.instructions.append(Gate(kind, tuple(qubits), cond))

    def h(self, qubit, *, cond=None):
        self._gate(GateKind.H, (qubit,), cond)

    def s(self, qubit, *, cond=None):
        self._gate(GateKind.S, (qubit,), cond)

    def sdg(self, qubit, *, cond=None):
        self._gate(GateKind.SDG, (qubit,), cond)

    def x(self, qubit, *, cond=None):
        self._gate(GateKind.X, (qubit,), cond)

    def z(self, qubit, *, cond=None):
        self._gate(GateKind.Z, (qubit,), cond)

    def cx(self, control, target, *, cond=None):
        self._gate(GateKind.CX, (control, target), cond)

    def measure(self, qubit, clbit):
        self.instructions.append(Measure(qubit, clbit))

    def barrier(self):
        self.instructions.append(Barrier())

    # -- equality is structural; the name is metadata -----------------------

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.num_clbits == other.num_clbits
            and self.instructions == other.instructions
        )

    def __repr__(self):
        return (
            f"Circuit({self.name!r}, qubits={self.num_qubits}, "
            f"clbits={self.num_clbits}, instructions={len(self.instructions)})"
        )

    def validate(self) -> list[Diagnostic]:
        return validate(self)


def validate(circuit: Circuit) -> list[Diagnostic]:
    """Structural checks; returns an empty list when the circuit is runnable."""
    diags: list[Diagnostic] = []
    nq, ncl = circuit.num_qubits, circuit.num_clbits
    if nq < 1:
        diags.append(Diagnostic(-1, f"circuit needs at least one qubit, has {nq}"))
    if ncl < 0:
        diags.append(Diagnostic(-1, f"negative clbit count {ncl}"))
    measured: set[int] = set()
    for i, instr in enumerate(circuit.instructions):
        if isinstance(instr, Barrier):
            continue
        if isinstance(instr, Measure):
            if not 0 <= instr.qubit < nq:
                diags.append(Diagnostic(i, f"measure qubit {instr.qubit} out of range"))
            if not 0 <= instr.clbit < ncl:
                diags.append(Diagnostic(i, f"measure clbit {instr.clbit} out of range"))
            measured.add(instr.qubit)
            continue
        kind = instr.kind
        if len(instr.qubits) != kind.num_qubits:
            diags.append(
                Diagnostic(i, f"{kind.value} takes {kind.num_qubits} qubit(s), "
                              f"got {len(instr.qubits)}")
            )
            continue
        for q in instr.qubits:
            if not 0 <= q < nq:
                diags.append(Diagnostic(i, f"qubit {q} out of range"))
            elif q in measured:
                diags.append(Diagnostic(i, f"gate on qubit {q} after its measurement"))
        if kind is GateKind.CX and len(set(instr.qubits)) != 2:
            diags.append(Diagnostic(i, "cx control and target must differ"))
        if instr.condition is not None:
            cbit, cval = instr.condition
            if not 0 <= cbit < ncl:
                diags.append(Diagnostic(i, f"condition clbit {cbit} out of range"))
            if cval not in (0, 1):
                diags.append(Diagnostic(i, f"condition value must be 0 or 1, got {cval}"))
    return diags


def _require_valid(circuit: Circuit) -> None:
    diags = validate(circuit)
    if diags:
        raise InvalidCircuitError(diags)


@dataclass
class BranchOutcome:
    """One exact measurement branch: the classical record (MSB-first),
    its probability, and the normalized final state."""

    clbits: str
    probability: float
    final_state: Statevector


@dataclass
class ShotCounts:
    counts: dict[str, int] = field(default_factory=dict)
    total_shots: int = 0
    seed: int = 0


def _bits_key(bits: list[int]) -> str:
    return "".join("1" if bits[k] else "0" for k in reversed(range(len(bits))))


def _compile_tape(circuit: Circuit):
    rows = []
    n_meas = 0
    for instr in circuit.instructions:
        if isinstance(instr, Barrier):
            continue
        if isinstance(instr, Measure):
            rows.append((OP_MEASURE, instr.qubit, instr.clbit, -1, 0))
            n_meas += 1
            continue
        cbit, cval = instr.condition if instr.condition is not None else (-1, 0)
        if instr.kind is GateKind.CX:
            rows.append((OP_CX, instr.qubits[0], instr.qubits[1], cbit, cval))
        else:
            rows.append((_OPCODE[instr.kind], instr.qubits[0], 0, cbit, cval))
    tape = np.array(rows, dtype=np.int64).reshape(-1, 5)
    mats = np.stack([kind.matrix for kind in ONE_QUBIT_GATES]).astype(np.complex128)
    return tape, mats, n_meas


def _initial_amps(circuit: Circuit, initial_state: Optional[Statevector]) -> np.ndarray:
    if initial_state is None:
        return zero_state(circuit.num_qubits).amps
    if initial_state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"initial state has {initial_state.num_qubits} qubits, "
            f"circuit has {circuit.num_qubits}"
        )
    return initial_state.amps.copy()


def run_exact(
    circuit: Circuit, *, initial_state: Optional[Statevector] = None
) -> list[BranchOutcome]:
    """Enumerate all measurement branches with exact probabilities.

    Branches are emitted depth-first with outcome 0 explored before 1, so
    the order is deterministic.  Probabilities are conditional products of
    exact projector weights and sum to 1 up to float error.
    """
    _require_valid(circuit)
    n_meas = sum(isinstance(x, Measure) for x in circuit.instructions)
    if n_meas > MAX_EXACT_MEASURES:
        raise CapacityError(
            f"{n_meas} measurements would enumerate up to 2^{n_meas} branches "
            f"(cap is 2^{MAX_EXACT_MEASURES})"
        )
    mats = {kind: np.asarray(kind.matrix) for kind in ONE_QUBIT_GATES}
    instrs = circuit.instructions
    out: list[BranchOutcome] = []

    def walk(pos: int, amps: np.ndarray, prob: float, bits: list[int]) -> None:
        for i in range(pos, len(instrs)):
            instr = instrs[i]
            if isinstance(instr, Barrier):
                continue
            if isinstance(instr, Measure):
                p = [
                    _impl.prob_of(amps, instr.qubit, 0),
                    _impl.prob_of(amps, instr.qubit, 1),
                ]
                for outcome in (0, 1):
                    if p[outcome] < PRUNE_EPS:
                        continue
                    branch = amps.copy()
                    _impl.project(branch, instr.qubit, outcome)
                    _impl.scale(branch, 1.0 / math.sqrt(p[outcome]))
                    nbits = list(bits)
                    nbits[instr.clbit] = outcome
                    walk(i + 1, branch, prob * p[outcome], nbits)
                return
            if instr.condition is not None:
                cbit, cval = instr.condition
                if bits[cbit] != cval:
                    continue
            if instr.kind is GateKind.CX:
                _impl.apply_cx(amps, instr.qubits[0], instr.qubits[1])
            else:
                _impl.apply_1q(amps, instr.qubits[0], mats[instr.kind])
        out.append(
            BranchOutcome(_bits_key(bits), prob, Statevector(circuit.num_qubits, amps))
        )

    walk(0, _initial_amps(circuit, initial_state), 1.0, [0] * circuit.num_clbits)
    return out


def _uniforms_for(seed: int, shots: int, n_meas: int) -> np.ndarray:
    """The documented shot-randomness contract: row i comes from
    Philox(key=(seed mod 2^64, i)) and holds the shot's measurement draws."""
    u = np.empty((shots, n_meas), dtype=np.float64)
    if n_meas == 0:
        return u
    seed64 = seed & ((1 << 64) - 1)
    for i in range(shots):
        key = np.array([seed64, i], dtype=np.uint64)
        gen = np.random.Generator(np.random.Philox(key=key))
        u[i] = gen.random(n_meas)
    return u


def run_shots(
    circuit: Circuit,
    shots: int,
    seed: int = 0,
    *,
    initial_state: Optional[Statevector] = None,
) -> ShotCounts:
    """Sample the circuit ``shots`` times; reproducible for a given seed."""
    _require_valid(circuit)
    if not isinstance(shots, int) or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots}")
    tape, mats, n_meas = _compile_tape(circuit)
    base = _initial_amps(circuit, initial_state)
    ncl = circuit.num_clbits
    bits = np.zeros((shots, max(ncl, 1)), dtype=np.uint8)
    uniforms = _uniforms_for(seed, shots, n_meas)
    _impl.sample_shots(tape, mats, base, uniforms, bits)
    if ncl:
        weights = 1 << np.arange(ncl, dtype=np.int64)
        vals = bits[:, :ncl].astype(np.int64) @ weights
    else:
        vals = np.zeros(shots, dtype=np.int64)
    uniq, cnt = np.unique(vals, return_counts=True)
    counts = {
        (format(int(v), f"0{ncl}b") if ncl else ""): int(c)
        for v, c in zip(uniq, cnt)
    }
    return ShotCounts(counts=counts, total_shots=shots, seed=seed)


# -- result serialization ---------------------------------------------------


def exact_result_json(circuit: Circuit, branches: list[BranchOutcome]) -> dict:
    return {
        "circuit": circuit.name,
        "mode": "exact",
        "branches": [
            {"clbits": b.clbits, "prob": b.probability} for b in branches
        ],
    }


def shots_result_json(circuit: Circuit, result: ShotCounts) -> dict:
    return {
        "circuit": circuit.name,
        "mode": "shots",
        "counts": {k: result.counts[k] for k in sorted(result.counts)},
        "shots": result.total_shots,
        "seed": result.seed,
    }
