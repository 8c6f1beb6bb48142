"""Gate alphabet and unitaries.

The simulator supports exactly the gates needed by the pigeonhole circuits:
H, S, S-dagger, X, Z and CX.  Matrices are exposed as read-only arrays in
the computational basis; for CX the convention is control = qubit given
first, little-endian index order (qubit 0 is the least significant bit).
"""

import enum

import numpy as np

_SQ2 = 1.0 / np.sqrt(2.0)


class GateKind(enum.Enum):
    H = "h"
    S = "s"
    SDG = "sdg"
    X = "x"
    Z = "z"
    CX = "cx"

    @property
    def num_qubits(self) -> int:
        return 2 if self is GateKind.CX else 1

    @property
    def matrix(self) -> np.ndarray:
        """Unitary matrix (2x2, or 4x4 for CX) as a read-only array."""
        return _MATRICES[self]


def _frozen(rows):
    m = np.array(rows, dtype=np.complex128)
    m.setflags(write=False)
    return m


_MATRICES = {
    GateKind.H: _frozen([[_SQ2, _SQ2], [_SQ2, -_SQ2]]),
    GateKind.S: _frozen([[1, 0], [0, 1j]]),
    GateKind.SDG: _frozen([[1, 0], [0, -1j]]),
    GateKind.X: _frozen([[0, 1], [1, 0]]),
    GateKind.Z: _frozen([[1, 0], [0, -1]]),
    # Basis order |control target> = |00>,|01>,|10>,|11> with the target as
    # the low bit, i.e. index = 2*control + target.
    GateKind.CX: _frozen(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ]
    ),
}

ONE_QUBIT_GATES = (GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Z)
