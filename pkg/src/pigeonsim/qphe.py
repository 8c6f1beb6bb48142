"""Quantum pigeonhole experiment: projectors, schemes, parity tables.

Three qubits are prepared in |+++> and post-selected in the +/-i basis.
For any pair of qubits a parity measurement (0 = same state, 1 = different)
is recorded by an ancilla.  The pigeonhole paradox shows up in the parity
tables: whenever a post-selected pair carries *different* +/-i labels, the
parity bit says *same*, and when the labels agree it says *different* --
so no two qubits are ever found in the same box, for any pair.

Three hardware-motivated schemes realize the same parity measurement:

* ``direct``: one ancilla, CX from both pair qubits onto it;
* ``distillation``: a Bell pair absorbs one CX from each pair qubit; the
  parity is the XOR of the two ancilla readouts (computed in analysis);
* ``common_target``: the two Bell qubits write their parity onto a third
  ancilla, so a single readout carries the bit.  A ``feed_forward``
  variant replaces the two CXs onto that third ancilla with
  measurement-conditioned X corrections.

Post-selection bookkeeping: after the basis rotation (S then H on each
system qubit) a measured 1 corresponds to the +i label and 0 to -i.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .circuit import BranchOutcome, Circuit, run_exact
from .errors import ModelViolationError
from .gates import GateKind
from .statevector import (
    Statevector,
    apply_1q,
    build_product_state,
    inner_product,
    zero_state,
)

PLUS_I = "+i"
MINUS_I = "-i"

# Display order of the eight post-selected labels: qubit 1 varies slowest,
# +i before -i.
LABELS: tuple[tuple[str, str, str], ...] = tuple(
    (PLUS_I if b1 else MINUS_I, PLUS_I if b2 else MINUS_I, PLUS_I if b3 else MINUS_I)
    for b1 in (1, 0)
    for b2 in (1, 0)
    for b3 in (1, 0)
)
LABEL_KEYS: tuple[str, ...] = tuple("".join(lbl) for lbl in LABELS)

PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (2, 3), (1, 3))
PAIR_KEYS: tuple[str, ...] = tuple(f"{l}{m}" for l, m in PAIRS)

# Expected parity bits per post-selected label, identical for all three
# schemes; columns are the pairs (1,2), (2,3), (1,3).  Equal labels on a
# pair give parity 1 ("different boxes"), unequal labels give 0 ("same
# box"): the pigeonhole paradox in tabular form.
EXPECTED_PARITY: dict[str, tuple[int, int, int]] = {
    "+i+i+i": (1, 1, 1),
    "+i+i-i": (1, 0, 0),
    "+i-i+i": (0, 0, 1),
    "+i-i-i": (0, 1, 0),
    "-i+i+i": (0, 1, 0),
    "-i+i-i": (0, 0, 1),
    "-i-i+i": (1, 0, 0),
    "-i-i-i": (1, 1, 1),
}

# A parity bit must be this deterministic; larger contrary weight is an error.
DETERMINISM_EPS = 1e-9

_SYSTEM = (0, 1, 2)


class SchemeId(enum.Enum):
    DIRECT = "direct"
    DISTILLATION = "distillation"
    COMMON_TARGET = "common_target"


def _normalize_pair(pair) -> tuple[int, int]:
    if isinstance(pair, str):
        for l, m in PAIRS:
            if pair == f"{l}{m}":
                return l, m
        raise ValueError(f"pair must be one of {PAIR_KEYS}, got {pair!r}")
    l, m = pair
    if (l, m) not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}, got {(l, m)!r}")
    return l, m


@dataclass(frozen=True)
class PairProjector:
    """Projector onto the two qubits of a pair being in the same basis
    state: Pi = |00><00| + |11><11| on qubits (l, m), identity elsewhere."""

    l: int
    m: int

    def __post_init__(self):
        if not (1 <= self.l <= 3 and 1 <= self.m <= 3 and self.l != self.m):
            raise ValueError(f"need two distinct qubits from 1..3, got {(self.l, self.m)}")

    @property
    def key(self) -> str:
        return f"{self.l}{self.m}"


def build_preselection() -> Statevector:
    """|+++> prepared by a Hadamard on each of the three qubits."""
    state = zero_state(3)
    for q in _SYSTEM:
        state = apply_1q(state, GateKind.H, q)
    return state


def apply_pair_projector(
    state: Statevector, proj: PairProjector
) -> tuple[Statevector, float]:
    """Apply the same-state projector; returns (projected state, weight).

    The state is not renormalized; the weight is the squared norm kept.
    """
    if state.num_qubits != 3:
        raise ValueError(f"pair projectors act on 3 qubits, state has {state.num_qubits}")
    idx = np.arange(state.amps.size)
    same = ((idx >> (proj.l - 1)) & 1) == ((idx >> (proj.m - 1)) & 1)
    amps = np.where(same, state.amps, 0.0)
    weight = float(np.sum(amps.real**2 + amps.imag**2))
    return Statevector(3, amps), weight


def pigeonhole_overlap(proj: PairProjector, label: Iterable[str]) -> complex:
    """<label| Pi_lm |+++> for a +/-i product label.

    For every label and every pair, exactly one of this overlap and its
    complement (through 1 - Pi_lm) vanishes; post-selection therefore fixes
    each parity bit completely.
    """
    projected, _ = apply_pair_projector(build_preselection(), proj)
    return inner_product(build_product_state(tuple(label)), projected)


# -- scheme circuits ----------------------------------------------------------


def _check_phase_gate(phase_gate: GateKind) -> None:
    if phase_gate.num_qubits != 1:
        raise ValueError(f"phase gate must be single-qubit, got {phase_gate.name}")


def _rotate_and_measure_system(circ: Circuit, phase_gate: GateKind) -> None:
    # Map the +/-i basis onto the computational basis: phase then Hadamard.
    for q in _SYSTEM:
        circ._gate(phase_gate, (q,), None)
    for q in _SYSTEM:
        circ.h(q)
    for q in _SYSTEM:
        circ.measure(q, q)


def build_scheme_circuit(
    scheme: SchemeId,
    pair,
    *,
    feed_forward: bool = False,
    phase_gate: GateKind = GateKind.S,
) -> Circuit:
    """Full circuit for one scheme and one qubit pair.

    Clbits 0..2 hold the system readout (1 = +i).  The parity lands in
    clbit 3 for ``direct`` and ``common_target``; for ``distillation`` it
    is the XOR of clbits 3 and 4, computed in analysis.  The feed-forward
    variant of ``common_target`` also records raw ancilla bits in clbits
    4 and 5.
    """
    l, m = _normalize_pair(pair)
    _check_phase_gate(phase_gate)
    if feed_forward and scheme is not SchemeId.COMMON_TARGET:
        raise ValueError("feed_forward is only available for the common_target scheme")

    if scheme is SchemeId.DIRECT:
        circ = Circuit(4, 4, name=f"direct-w{l}{m}")
        for q in _SYSTEM:
            circ.h(q)
        circ.cx(l - 1, 3)
        circ.cx(m - 1, 3)
        _rotate_and_measure_system(circ, phase_gate)
        circ.measure(3, 3)
        return circ

    if scheme is SchemeId.DISTILLATION:
        circ = Circuit(5, 5, name=f"distillation-w{l}{m}")
        for q in _SYSTEM:
            circ.h(q)
        circ.h(3)
        circ.cx(3, 4)
        circ.cx(l - 1, 3)
        circ.cx(m - 1, 4)
        circ.measure(3, 3)
        circ.measure(4, 4)
        _rotate_and_measure_system(circ, phase_gate)
        return circ

    if scheme is SchemeId.COMMON_TARGET:
        suffix = "_ff" if feed_forward else ""
        circ = Circuit(6, 6 if feed_forward else 4,
                       name=f"common_target{suffix}-w{l}{m}")
        for q in _SYSTEM:
            circ.h(q)
        circ.h(3)
        circ.cx(3, 4)
        circ.cx(l - 1, 3)
        circ.cx(m - 1, 4)
        if feed_forward:
            circ.measure(3, 4)
            circ.measure(4, 5)
            circ.x(5, cond=(4, 1))
            circ.x(5, cond=(5, 1))
        else:
            circ.cx(3, 5)
            circ.cx(4, 5)
        circ.measure(5, 3)
        _rotate_and_measure_system(circ, phase_gate)
        return circ

    raise ValueError(f"unknown scheme {scheme!r}")


# -- branch analysis ----------------------------------------------------------


def branch_label(clbits: str) -> tuple[str, str, str]:
    """Post-selected label of a branch record (clbits 0..2, 1 = +i)."""
    return tuple(
        PLUS_I if clbits[-1 - k] == "1" else MINUS_I for k in range(3)
    )


def branch_parity(scheme: SchemeId, clbits: str) -> int:
    """Parity bit of a branch record for the given scheme."""
    if scheme is SchemeId.DISTILLATION:
        return int(clbits[-4]) ^ int(clbits[-5])
    return int(clbits[-4])


def joint_distribution(
    scheme: SchemeId, branches: Iterable[BranchOutcome]
) -> dict[tuple[str, int], float]:
    """Probability of each (label, parity) pair, ancilla details marginalized."""
    joint: dict[tuple[str, int], float] = {}
    for b in branches:
        key = ("".join(branch_label(b.clbits)), branch_parity(scheme, b.clbits))
        joint[key] = joint.get(key, 0.0) + b.probability
    return joint


@dataclass
class ParityTable:
    """Parity bits and post-selection probabilities for all eight labels."""

    scheme: SchemeId
    rows: dict[str, tuple[int, int, int]]
    probs: dict[str, float]
    max_leakage: float = 0.0
    variant: str = ""

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme.value + (f"_{self.variant}" if self.variant else ""),
            "rows": [
                {
                    "label": key,
                    "w12": self.rows[key][0],
                    "w23": self.rows[key][1],
                    "w13": self.rows[key][2],
                    "prob": self.probs[key],
                }
                for key in LABEL_KEYS
            ],
        }

    def format_text(self) -> str:
        name = self.scheme.value + (f" ({self.variant})" if self.variant else "")
        lines = [f"scheme: {name}", "post-selection   W12  W23  W13    prob"]
        for key in LABEL_KEYS:
            w12, w23, w13 = self.rows[key]
            lines.append(
                f"{key:<15}  {w12:>3}  {w23:>3}  {w13:>3}  {self.probs[key]:.4f}"
            )
        return "\n".join(lines)


def _deterministic_bit(
    joint: dict[tuple[str, int], float], label_key: str, context: str
) -> tuple[int, float, float]:
    """Collapse (label, 0/1) weights to one bit; returns (bit, prob, leakage)."""
    p0 = joint.get((label_key, 0), 0.0)
    p1 = joint.get((label_key, 1), 0.0)
    total = p0 + p1
    if total <= 0.0:
        raise ModelViolationError(f"{context}: label {label_key} never observed")
    leak = min(p0, p1)
    if leak > DETERMINISM_EPS:
        raise ModelViolationError(
            f"{context}: parity for label {label_key} is not deterministic "
            f"(weights {p0:.3e} / {p1:.3e})"
        )
    return (1 if p1 > p0 else 0), total, leak


def parity_table(
    scheme: SchemeId,
    *,
    feed_forward: bool = False,
    phase_gate: GateKind = GateKind.S,
) -> ParityTable:
    """Exact parity table for one scheme, one run per qubit pair."""
    bits: dict[str, list[int]] = {key: [] for key in LABEL_KEYS}
    probs: dict[str, float] = {}
    max_leak = 0.0
    for l, m in PAIRS:
        circ = build_scheme_circuit(
            scheme, (l, m), feed_forward=feed_forward, phase_gate=phase_gate
        )
        joint = joint_distribution(scheme, run_exact(circ))
        for key in LABEL_KEYS:
            bit, total, leak = _deterministic_bit(joint, key, circ.name)
            bits[key].append(bit)
            max_leak = max(max_leak, leak)
            if key in probs:
                if abs(probs[key] - total) > DETERMINISM_EPS:
                    raise ModelViolationError(
                        f"{circ.name}: post-selection probability of {key} "
                        f"changed across pairs ({probs[key]:.6f} vs {total:.6f})"
                    )
            else:
                probs[key] = total
    rows = {key: tuple(bits[key]) for key in LABEL_KEYS}
    return ParityTable(
        scheme=scheme,
        rows=rows,
        probs=probs,
        max_leakage=max_leak,
        variant="feed_forward" if feed_forward else "",
    )


@dataclass
class EquivalenceReport:
    """Cross-scheme comparison of parity tables."""

    ok: bool
    differences: list[str]
    tables: dict[str, ParityTable]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "differences": list(self.differences),
            "tables": {name: t.to_json() for name, t in self.tables.items()},
        }


def scheme_equivalence_report(
    tables: Optional[dict[str, ParityTable]] = None,
) -> EquivalenceReport:
    """Verify all schemes produce one and the same parity table.

    Parity bits must agree exactly and post-selection probabilities within
    1e-9.  Pass ``tables`` to compare externally built tables instead.
    """
    if tables is None:
        tables = {scheme.value: parity_table(scheme) for scheme in SchemeId}
    names = sorted(tables)
    diffs: list[str] = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ta, tb = tables[a], tables[b]
            for key in LABEL_KEYS:
                if ta.rows[key] != tb.rows[key]:
                    diffs.append(
                        f"{a} vs {b}: parity bits differ for {key}: "
                        f"{ta.rows[key]} vs {tb.rows[key]}"
                    )
                if abs(ta.probs[key] - tb.probs[key]) > DETERMINISM_EPS:
                    diffs.append(
                        f"{a} vs {b}: post-selection probability differs for {key}: "
                        f"{ta.probs[key]:.12f} vs {tb.probs[key]:.12f}"
                    )
    return EquivalenceReport(ok=not diffs, differences=diffs, tables=dict(tables))


# -- closed-form checks on the pre-measurement pipeline -----------------------

# Per-qubit amplitudes after H, S, H on |0>: (<0|, <1|) components.
_C0 = 0.5 + 0.5j
_C1 = 0.5 - 0.5j


@dataclass
class FinalStateReport:
    """How closely the H-S-H pipeline state matches its product form."""

    ok: bool
    max_amplitude_error: float
    max_probability_error: float
    norm_error: float
    max_product_residual: float
    amplitudes: np.ndarray = field(repr=False, default=None)


def check_final_state_amplitudes(
    phase_gate: GateKind = GateKind.S, tol: float = 1e-12
) -> FinalStateReport:
    """Check the pre-measurement state of the rotated preselection.

    Applying H, then the phase gate, then H to each of three |0> qubits
    must give the product state with per-qubit amplitudes ((1+i)/2,
    (1-i)/2), hence all eight joint probabilities exactly 1/8.
    """
    state = zero_state(3)
    for q in _SYSTEM:
        state = apply_1q(state, GateKind.H, q)
    for q in _SYSTEM:
        state = apply_1q(state, phase_gate, q)
    for q in _SYSTEM:
        state = apply_1q(state, GateKind.H, q)
    amps = state.amps
    expected = np.array(
        [
            (_C1 if idx & 1 else _C0)
            * (_C1 if idx & 2 else _C0)
            * (_C1 if idx & 4 else _C0)
            for idx in range(8)
        ],
        dtype=np.complex128,
    )
    amp_err = float(np.max(np.abs(amps - expected)))
    prob_err = float(np.max(np.abs(np.abs(amps) ** 2 - 0.125)))
    norm_err = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
    residual = 0.0
    for j in range(3):
        for k in range(8):
            if k & (1 << j):
                continue
            residual = max(
                residual, abs(amps[k | (1 << j)] * _C0 - amps[k] * _C1)
            )
    ok = max(amp_err, prob_err, norm_err, residual) <= tol
    return FinalStateReport(
        ok=ok,
        max_amplitude_error=amp_err,
        max_probability_error=prob_err,
        norm_error=norm_err,
        max_product_residual=residual,
        amplitudes=amps,
    )


@dataclass
class MappingReport:
    """Which measured bit pattern each +/-i product label produces."""

    ok: bool
    mapping: dict[str, str]
    expected: dict[str, str]
    notes: list[str]


def _label_bits_key(label: tuple[str, str, str]) -> str:
    # clbit k records qubit k; MSB-first string, 1 = +i.
    return "".join("1" if label[k] == PLUS_I else "0" for k in (2, 1, 0))


def postselect_mapping_report(
    phase_gate: GateKind = GateKind.S,
) -> MappingReport:
    """Drive each +/-i product state through the basis rotation and check
    it lands on its own readout pattern (measured 1 = +i label)."""
    mapping: dict[str, str] = {}
    expected: dict[str, str] = {}
    circ = Circuit(3, 3, name="postselect-mapping")
    _rotate_and_measure_system(circ, phase_gate)
    for label in LABELS:
        key = "".join(label)
        expected[key] = _label_bits_key(label)
        branches = run_exact(circ, initial_state=build_product_state(label))
        best = max(branches, key=lambda b: b.probability)
        stray = sum(b.probability for b in branches) - best.probability
        if stray > DETERMINISM_EPS:
            raise ModelViolationError(
                f"basis rotation split label {key} across readouts "
                f"(stray weight {stray:.3e})"
            )
        mapping[key] = best.clbits
    notes: list[str] = []
    wrong = {k for k in mapping if mapping[k] != expected[k]}
    if wrong:
        conjugated = {
            "".join(label): "".join(
                MINUS_I if t == PLUS_I else PLUS_I for t in label
            )
            for label in LABELS
        }
        if all(mapping[k] == expected[conjugated[k]] for k in mapping):
            notes.append(
                "readouts match the conjugate labels: +i and -i are swapped, "
                "permuting the table rows +i+i+i<->-i-i-i, +i+i-i<->-i-i+i, "
                "+i-i+i<->-i+i-i, +i-i-i<->-i+i+i"
            )
        else:
            for k in sorted(wrong):
                notes.append(
                    f"label {k}: measured {mapping[k]}, expected {expected[k]}"
                )
    return MappingReport(ok=not wrong, mapping=mapping, expected=expected, notes=notes)
