"""Dense statevector representation and the primitive operations on it.

Conventions:

* little-endian indexing: qubit 0 is the least significant bit of the
  amplitude index, so ``amps[0b101]`` is the amplitude of qubit2=1,
  qubit1=0, qubit0=1;
* all public operations are pure (they return new states), the in-place
  work happens inside the kernel backend;
* capacity is capped at 24 qubits (a 256 MiB amplitude array).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as _impl
from .errors import CapacityError, ImpossiblePostselectionError, InvalidInstructionError
from .gates import GateKind

MAX_QUBITS = 24

# Weight below which a projection is treated as projecting onto nothing.
_ZERO_WEIGHT = 1e-15

_SQ2 = 1.0 / math.sqrt(2.0)

# Single-qubit basis vectors accepted by build_product_state.
_BASIS_LABELS = {
    "zero": (1.0 + 0.0j, 0.0 + 0.0j),
    "one": (0.0 + 0.0j, 1.0 + 0.0j),
    "plus": (_SQ2 + 0.0j, _SQ2 + 0.0j),
    "minus": (_SQ2 + 0.0j, -_SQ2 + 0.0j),
    "plus_i": (_SQ2 + 0.0j, _SQ2 * 1.0j),
    "minus_i": (_SQ2 + 0.0j, -_SQ2 * 1.0j),
}
_BASIS_ALIASES = {
    "0": "zero",
    "1": "one",
    "+": "plus",
    "-": "minus",
    "+i": "plus_i",
    "-i": "minus_i",
}


class Statevector:
    """A pure state of ``num_qubits`` qubits as a dense complex128 array."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps: Iterable[complex] | None = None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CapacityError(
                f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}"
            )
        dim = 1 << num_qubits
        if amps is None:
            arr = np.zeros(dim, dtype=np.complex128)
            arr[0] = 1.0
        else:
            arr = np.ascontiguousarray(amps, dtype=np.complex128)
            if arr.shape != (dim,):
                raise ValueError(
                    f"expected {dim} amplitudes for {num_qubits} qubits, "
                    f"got shape {arr.shape}"
                )
            if arr is amps:
                arr = arr.copy()
        self.num_qubits = num_qubits
        self.amps = arr

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amps)

    def norm_sq(self) -> float:
        return _impl.norm_sq(self.amps)

    def probabilities(self) -> np.ndarray:
        """|amp|^2 per computational basis index."""
        return (self.amps.real**2 + self.amps.imag**2).astype(np.float64)

    def __repr__(self) -> str:
        return f"Statevector(num_qubits={self.num_qubits})"


def zero_state(num_qubits: int) -> Statevector:
    """|0...0> on ``num_qubits`` qubits."""
    return Statevector(num_qubits)


def _check_qubit(state: Statevector, qubit: int, role: str = "qubit") -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(
            f"{role} {qubit} out of range for {state.num_qubits}-qubit state"
        )


def apply_1q(state: Statevector, gate: GateKind, target: int) -> Statevector:
    """Apply a single-qubit gate, returning the new state."""
    if gate.num_qubits != 1:
        raise InvalidInstructionError(f"{gate.name} is not a single-qubit gate")
    _check_qubit(state, target)
    out = state.copy()
    _impl.apply_1q(out.amps, target, gate.matrix)
    return out


def apply_cx(state: Statevector, control: int, target: int) -> Statevector:
    """Apply CX with the given control and target, returning the new state."""
    _check_qubit(state, control, "control")
    _check_qubit(state, target, "target")
    if control == target:
        raise InvalidInstructionError("CX control and target must differ")
    out = state.copy()
    _impl.apply_cx(out.amps, control, target)
    return out


def inner_product(a: Statevector, b: Statevector) -> complex:
    """<a|b> (conjugate-linear in the first argument)."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("states have different qubit counts")
    return _impl.inner(a.amps, b.amps)


def probability_of(state: Statevector, qubit: int, outcome: int) -> float:
    """Total weight of basis states where ``qubit`` reads ``outcome``."""
    _check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    return _impl.prob_of(state.amps, qubit, outcome)


def project(state: Statevector, qubit: int, outcome: int) -> tuple[Statevector, float]:
    """Project onto ``qubit == outcome`` without renormalizing.

    Returns the projected state and the weight kept by the projection.
    Raises ImpossiblePostselectionError when that weight is below 1e-15.
    """
    _check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    out = state.copy()
    kept = _impl.project(out.amps, qubit, outcome)
    if kept < _ZERO_WEIGHT:
        raise ImpossiblePostselectionError(
            f"projection onto qubit {qubit} == {outcome} has weight {kept:.3e}"
        )
    return out, kept


def renormalize(state: Statevector) -> Statevector:
    """Scale the state back to unit norm."""
    nsq = _impl.norm_sq(state.amps)
    if nsq <= _ZERO_WEIGHT:
        raise ImpossiblePostselectionError(
            f"cannot renormalize a state of squared norm {nsq:.3e}"
        )
    out = state.copy()
    _impl.scale(out.amps, 1.0 / math.sqrt(nsq))
    return out


def build_product_state(labels: Sequence[str]) -> Statevector:
    """Tensor product of single-qubit basis states.

    ``labels[k]`` names the state of qubit k; accepted names are zero, one,
    plus, minus, plus_i, minus_i (or the short forms 0, 1, +, -, +i, -i).
    """
    if not 1 <= len(labels) <= MAX_QUBITS:
        raise CapacityError(f"need 1..{MAX_QUBITS} labels, got {len(labels)}")
    amps = np.ones(1, dtype=np.complex128)
    for label in labels:
        key = _BASIS_ALIASES.get(label, label)
        if key not in _BASIS_LABELS:
            raise ValueError(f"unknown basis label {label!r}")
        # Prepend as the new most-significant qubit so labels[0] stays at bit 0.
        amps = np.kron(np.asarray(_BASIS_LABELS[key], dtype=np.complex128), amps)
    return Statevector(len(labels), amps)
