"""Exception types shared across the package."""


class PigeonSimError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(PigeonSimError):
    """A requested simulation exceeds a hard resource bound."""


class InvalidInstructionError(PigeonSimError):
    """A gate or measurement was constructed with unusable operands."""


class ImpossiblePostselectionError(PigeonSimError):
    """Projection or renormalization onto a branch of (near-)zero weight."""


class InvalidCircuitError(PigeonSimError):
    """A circuit failed validation.  Carries the full diagnostic list."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid circuit: {lines}")


class ModelViolationError(PigeonSimError):
    """An analysis-stage consistency check failed (e.g. a parity bit that
    should be deterministic came out mixed)."""


class QasmError(PigeonSimError):
    """Base class for OpenQASM parsing errors.  Positions are 1-based."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class QasmSyntaxError(QasmError):
    """Input does not match the accepted grammar."""


class UnsupportedGateError(QasmError):
    """A syntactically valid operation outside the supported gate set."""

    def __init__(self, gate_name, line, col):
        self.gate_name = gate_name
        super().__init__(f"unsupported operation {gate_name!r}", line, col)


class QasmSemanticError(QasmError):
    """Well-formed input that violates a semantic rule (bad register,
    index out of range, malformed condition, ...)."""
