"""OpenQASM 2.0 reader/writer for the supported gate set.

The accepted subset (see docs/qasm_subset.md for the grammar): an
``OPENQASM 2.0;`` header, ``include`` lines (ignored), ``qreg``/``creg``
declarations, the gates h/s/sdg/x/z/cx with explicitly indexed operands,
``measure q[i] -> c[j];``, ``barrier``, ``//`` comments, and
``if(reg==v) gate ...;`` conditions on 1-bit classical registers.

Multiple registers are flattened in declaration order.  The exporter uses a
single quantum register ``q``; classical bits that carry conditions get
their own 1-bit registers (named ``k<bit>``) so the text stays inside the
subset, while the remaining bits are grouped into registers ``c``, ``c2``,
...  Flattening preserves bit indices, so parse(export(c)) == c.

All errors carry 1-based line/column positions and no partially built
circuit ever escapes.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .circuit import Barrier, Circuit, Gate, Measure, validate
from .errors import (
    InvalidCircuitError,
    QasmSemanticError,
    QasmSyntaxError,
    UnsupportedGateError,
)
from .gates import GateKind

_GATES = {kind.value: kind for kind in GateKind}

_KEYWORDS = {"OPENQASM", "include", "qreg", "creg", "measure", "barrier", "if"}

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<nl>\n)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<real>\d+\.\d+)"
    r"|(?P<int>\d+)"
    r"|(?P<string>\"[^\"\n]*\")"
    r"|(?P<arrow>->)"
    r"|(?P<eqeq>==)"
    r"|(?P<sym>[;,\[\]()])"
)


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    pos, line, col = 0, 1, 1
    end = len(text)
    while pos < end:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col = 1
            pos = m.end()
            continue
        if kind not in ("ws", "comment"):
            out_kind = "sym" if kind in ("arrow", "eqeq") else kind
            toks.append(Token(out_kind, m.group(), line, col))
        col += m.end() - pos
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class _Reg(NamedTuple):
    offset: int
    size: int
    quantum: bool


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.regs: dict[str, _Reg] = {}
        self.nq = 0
        self.ncl = 0
        self.instructions: list = []
        self.measured: set[int] = set()

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, message: str, tok: Token, cls=QasmSyntaxError):
        raise cls(message, tok.line, tok.col)

    def expect_sym(self, sym: str) -> Token:
        tok = self.advance()
        if tok.kind != "sym" or tok.value != sym:
            self.fail(f"expected {sym!r}, found {tok.value or 'end of input'!r}", tok)
        return tok

    def expect_id(self) -> Token:
        tok = self.advance()
        if tok.kind != "id":
            self.fail(f"expected an identifier, found {tok.value or 'end of input'!r}", tok)
        return tok

    def expect_int(self) -> tuple[int, Token]:
        tok = self.advance()
        if tok.kind != "int":
            self.fail(f"expected an integer, found {tok.value or 'end of input'!r}", tok)
        return int(tok.value), tok

    # -- grammar -------------------------------------------------------------

    def parse(self) -> Circuit:
        self.header()
        while self.peek().kind != "eof":
            self.statement()
        if self.nq == 0:
            self.fail("no quantum register declared", self.peek(), QasmSemanticError)
        circuit = Circuit(self.nq, self.ncl, name="qasm")
        circuit.instructions = self.instructions
        diags = validate(circuit)
        if diags:
            # Parser rules above should make this unreachable; kept as a net.
            self.fail("; ".join(str(d) for d in diags), self.peek(), QasmSemanticError)
        return circuit

    def header(self) -> None:
        tok = self.advance()
        if tok.kind != "id" or tok.value != "OPENQASM":
            self.fail("file must start with 'OPENQASM 2.0;'", tok)
        ver = self.advance()
        if ver.kind != "real" or ver.value != "2.0":
            self.fail(f"unsupported OPENQASM version {ver.value!r}", ver)
        self.expect_sym(";")

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind != "id":
            self.fail(f"expected a statement, found {tok.value!r}", tok)
        name = tok.value
        if name == "include":
            self.advance()
            path = self.advance()
            if path.kind != "string":
                self.fail("include expects a quoted file name", path)
            self.expect_sym(";")
        elif name in ("qreg", "creg"):
            self.declaration(quantum=(name == "qreg"))
        elif name == "measure":
            self.measure_stmt()
        elif name == "barrier":
            self.barrier_stmt()
        elif name == "if":
            self.if_stmt()
        elif name in _GATES:
            self.advance()
            self.gate_stmt(_GATES[name], tok, condition=None)
        else:
            self.fail(name, tok, UnsupportedGateError)

    def declaration(self, quantum: bool) -> None:
        self.advance()
        name_tok = self.expect_id()
        if name_tok.value in _KEYWORDS or name_tok.value in _GATES:
            self.fail(f"{name_tok.value!r} cannot be used as a register name", name_tok)
        if name_tok.value in self.regs:
            self.fail(f"register {name_tok.value!r} already declared", name_tok,
                      QasmSemanticError)
        self.expect_sym("[")
        size, size_tok = self.expect_int()
        if size < 1:
            self.fail("register size must be at least 1", size_tok, QasmSemanticError)
        self.expect_sym("]")
        self.expect_sym(";")
        offset = self.nq if quantum else self.ncl
        self.regs[name_tok.value] = _Reg(offset, size, quantum)
        if quantum:
            self.nq += size
        else:
            self.ncl += size

    def bit_ref(self, quantum: bool) -> int:
        name_tok = self.expect_id()
        reg = self.regs.get(name_tok.value)
        if reg is None:
            self.fail(f"undeclared register {name_tok.value!r}", name_tok,
                      QasmSemanticError)
        if reg.quantum != quantum:
            want = "quantum" if quantum else "classical"
            self.fail(f"{name_tok.value!r} is not a {want} register", name_tok,
                      QasmSemanticError)
        self.expect_sym("[")
        idx, idx_tok = self.expect_int()
        if idx >= reg.size:
            self.fail(
                f"index {idx} out of range for {name_tok.value!r}[{reg.size}]",
                idx_tok, QasmSemanticError,
            )
        self.expect_sym("]")
        return reg.offset + idx

    def gate_stmt(self, kind: GateKind, at: Token, condition) -> None:
        qubits = [self.bit_ref(quantum=True)]
        if kind.num_qubits == 2:
            self.expect_sym(",")
            qubits.append(self.bit_ref(quantum=True))
        self.expect_sym(";")
        if kind is GateKind.CX and qubits[0] == qubits[1]:
            self.fail("cx control and target are the same qubit", at, QasmSemanticError)
        for q in qubits:
            if q in self.measured:
                self.fail("gate acts on an already measured qubit", at,
                          QasmSemanticError)
        self.instructions.append(Gate(kind, tuple(qubits), condition))

    def measure_stmt(self) -> None:
        self.advance()
        qubit = self.bit_ref(quantum=True)
        self.expect_sym("->")
        clbit = self.bit_ref(quantum=False)
        self.expect_sym(";")
        self.measured.add(qubit)
        self.instructions.append(Measure(qubit, clbit))

    def barrier_stmt(self) -> None:
        self.advance()
        while self.peek().kind == "id":
            name_tok = self.expect_id()
            reg = self.regs.get(name_tok.value)
            if reg is None or not reg.quantum:
                self.fail(f"barrier expects quantum registers, got {name_tok.value!r}",
                          name_tok, QasmSemanticError)
            if self.peek().kind == "sym" and self.peek().value == "[":
                self.advance()
                idx, idx_tok = self.expect_int()
                if idx >= reg.size:
                    self.fail(
                        f"index {idx} out of range for {name_tok.value!r}[{reg.size}]",
                        idx_tok, QasmSemanticError,
                    )
                self.expect_sym("]")
            if self.peek().kind == "sym" and self.peek().value == ",":
                self.advance()
                continue
            break
        self.expect_sym(";")
        self.instructions.append(Barrier())

    def if_stmt(self) -> None:
        self.advance()
        self.expect_sym("(")
        name_tok = self.expect_id()
        reg = self.regs.get(name_tok.value)
        if reg is None:
            self.fail(f"undeclared register {name_tok.value!r}", name_tok,
                      QasmSemanticError)
        if reg.quantum:
            self.fail(f"{name_tok.value!r} is not a classical register", name_tok,
                      QasmSemanticError)
        if reg.size != 1:
            self.fail("conditions are only supported on 1-bit registers", name_tok,
                      QasmSemanticError)
        self.expect_sym("==")
        value, val_tok = self.expect_int()
        if value not in (0, 1):
            self.fail("condition value must be 0 or 1", val_tok, QasmSemanticError)
        self.expect_sym(")")
        gate_tok = self.expect_id()
        if gate_tok.value in ("measure", "barrier", "if"):
            self.fail("only gates can be conditioned", gate_tok, QasmSemanticError)
        if gate_tok.value not in _GATES:
            raise UnsupportedGateError(gate_tok.value, gate_tok.line, gate_tok.col)
        self.gate_stmt(_GATES[gate_tok.value], gate_tok,
                       condition=(reg.offset, value))


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 source into a validated Circuit."""
    return _Parser(text).parse()


# -- export -------------------------------------------------------------------


def _creg_layout(circuit: Circuit):
    """Split the flat clbit space into registers; condition bits get their
    own 1-bit register so `if` statements stay inside the subset."""
    cond_bits = {
        instr.condition[0]
        for instr in circuit.instructions
        if isinstance(instr, Gate) and instr.condition is not None
    }
    segments: list[tuple[str, int, int]] = []
    refs: dict[int, str] = {}
    run_start = None
    runs = 0

    def close_run(end: int) -> None:
        nonlocal run_start, runs
        if run_start is None:
            return
        runs += 1
        name = "c" if runs == 1 else f"c{runs}"
        segments.append((name, run_start, end - run_start))
        for k in range(run_start, end):
            refs[k] = f"{name}[{k - run_start}]"
        run_start = None

    for k in range(circuit.num_clbits):
        if k in cond_bits:
            close_run(k)
            name = f"k{k}"
            segments.append((name, k, 1))
            refs[k] = f"{name}[0]"
        elif run_start is None:
            run_start = k
    close_run(circuit.num_clbits)
    segments.sort(key=lambda seg: seg[1])
    return segments, refs


def export_qasm(circuit: Circuit) -> str:
    """Serialize a circuit; the result parses back to an equal circuit."""
    diags = validate(circuit)
    if diags:
        raise InvalidCircuitError(diags)
    segments, refs = _creg_layout(circuit)
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    for name, _, size in segments:
        lines.append(f"creg {name}[{size}];")
    cond_reg = {}
    for name, start, size in segments:
        if size == 1:
            cond_reg[start] = name
    for instr in circuit.instructions:
        if isinstance(instr, Barrier):
            lines.append("barrier q;")
        elif isinstance(instr, Measure):
            lines.append(f"measure q[{instr.qubit}] -> {refs[instr.clbit]};")
        else:
            args = ",".join(f"q[{q}]" for q in instr.qubits)
            stmt = f"{instr.kind.value} {args};"
            if instr.condition is not None:
                cbit, cval = instr.condition
                stmt = f"if({cond_reg[cbit]}=={cval}) {stmt}"
            lines.append(stmt)
    return "\n".join(lines) + "\n"
