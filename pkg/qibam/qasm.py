# qasm.py
"""Text form of circuits: a line-oriented subset of cQASM 1.0.

    version 1.0
    qubits <N>
    h q[i] | x q[i] | ry q[i],<angle> | rz q[i],<angle>
    cnot q[i],q[j] | toffoli q[i],q[j],q[k]
    cX q[c1],...,q[cm],q[t]          (m >= 3)
    cphase q[i1],...,q[ik],<angle>

`#` starts a comment, blank lines are ignored, whitespace around operands
is free and mnemonics are case-insensitive.
"""
from __future__ import annotations

import math
import re
from collections.abc import Callable, Iterator
from logging import getLogger

from beartype import beartype

from .circuit import Circuit
from .errors import (
    DuplicateQubitIndex,
    MissingHeader,
    QasmSyntaxError,
    QubitCountMismatch,
    QubitOutOfRange,
    UnknownGate,
)
from .gates import ControlledPhase, ControlledX, GateOp, Hadamard, RotationY, RotationZ
from .statevector import StateVector, apply

logger = getLogger(__name__)

QASM_VERSION = "1.0"

_QUBIT = re.compile(r"q\[(\d+)\]")
_HEADER_QUBITS = re.compile(r"qubits\s+(\d+)", re.IGNORECASE)
_VERSION = re.compile(r"version\s+(\S+)", re.IGNORECASE)


@beartype
def serialize(circuit: Circuit) -> str:
    """Write a circuit in the cQASM subset; DenseUnitary ops cannot be written."""
    lines = [f"version {QASM_VERSION}", f"qubits {circuit.num_qubits}"]
    lines.extend(op.dump() for op in circuit.ops)
    return "\n".join(lines) + "\n"


def _significant_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _qubit(token: str, line: int, num_qubits: int) -> int:
    match = _QUBIT.fullmatch(token)
    if match is None:
        raise QasmSyntaxError(line, f"Expected a qubit operand q[i], got {token!r}")
    q = int(match.group(1))
    if q >= num_qubits:
        raise QubitOutOfRange(line, f"Qubit {q} outside a {num_qubits}-qubit register")
    return q


def _angle(token: str, line: int) -> float:
    try:
        angle = float(token)
    except ValueError:
        raise QasmSyntaxError(line, f"Expected an angle, got {token!r}") from None
    if not math.isfinite(angle):
        raise QasmSyntaxError(line, f"Angle must be finite, got {token!r}")
    return angle


def _qubits(tokens: list[str], line: int, num_qubits: int) -> tuple[int, ...]:
    return tuple(_qubit(token, line, num_qubits) for token in tokens)


def _arity(tokens: list[str], expected: int, mnemonic: str, line: int) -> None:
    if len(tokens) != expected:
        raise QasmSyntaxError(
            line, f"{mnemonic} takes {expected} operands, got {len(tokens)}"
        )


def _load_h(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 1, "h", line)
    return Hadamard(_qubit(tokens[0], line, n))


def _load_x(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 1, "x", line)
    return ControlledX((), _qubit(tokens[0], line, n))


def _load_ry(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 2, "ry", line)
    return RotationY(_qubit(tokens[0], line, n), _angle(tokens[1], line))


def _load_rz(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 2, "rz", line)
    return RotationZ(_qubit(tokens[0], line, n), _angle(tokens[1], line))


def _load_cnot(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 2, "cnot", line)
    *controls, target = _qubits(tokens, line, n)
    return ControlledX(tuple(controls), target)


def _load_toffoli(tokens: list[str], line: int, n: int) -> GateOp:
    _arity(tokens, 3, "toffoli", line)
    *controls, target = _qubits(tokens, line, n)
    return ControlledX(tuple(controls), target)


def _load_cx(tokens: list[str], line: int, n: int) -> GateOp:
    if len(tokens) < 4:
        raise QasmSyntaxError(
            line, f"cX takes at least 3 controls and a target, got {len(tokens)} operands"
        )
    *controls, target = _qubits(tokens, line, n)
    return ControlledX(tuple(controls), target)


def _load_cphase(tokens: list[str], line: int, n: int) -> GateOp:
    if len(tokens) < 2:
        raise QasmSyntaxError(line, "cphase takes qubits followed by an angle")
    return ControlledPhase(_qubits(tokens[:-1], line, n), _angle(tokens[-1], line))


_LOADERS: dict[str, Callable[[list[str], int, int], GateOp]] = {
    "h": _load_h,
    "x": _load_x,
    "ry": _load_ry,
    "rz": _load_rz,
    "cnot": _load_cnot,
    "toffoli": _load_toffoli,
    "cx": _load_cx,
    "cphase": _load_cphase,
}


def _parse_header(lines: list[tuple[int, str]]) -> int:
    if not lines or not (version := _VERSION.fullmatch(lines[0][1])):
        line = lines[0][0] if lines else 1
        raise MissingHeader(line, "First statement must be 'version 1.0'")
    if version.group(1) != QASM_VERSION:
        raise QasmSyntaxError(lines[0][0], f"Unsupported version {version.group(1)!r}")
    if len(lines) < 2 or not (qubits := _HEADER_QUBITS.fullmatch(lines[1][1])):
        line = lines[1][0] if len(lines) > 1 else lines[0][0]
        raise MissingHeader(line, "Second statement must be 'qubits <N>'")
    num_qubits = int(qubits.group(1))
    if num_qubits < 1:
        raise QasmSyntaxError(lines[1][0], "A circuit needs at least one qubit")
    return num_qubits


@beartype
def parse(text: str, name: str = "qasm") -> Circuit:
    lines = list(_significant_lines(text))
    num_qubits = _parse_header(lines)
    ops: list[GateOp] = []
    for number, line in lines[2:]:
        mnemonic, *operands = line.split(None, 1)
        rest = operands[0] if operands else ""
        loader = _LOADERS.get(mnemonic.lower())
        if loader is None:
            raise UnknownGate(number, f"Unknown gate {mnemonic!r}")
        tokens = [token.strip() for token in rest.split(",")] if rest else []
        if any(not token for token in tokens):
            raise QasmSyntaxError(number, "Empty operand")
        try:
            ops.append(loader(tokens, number, num_qubits))
        except DuplicateQubitIndex as e:
            raise QasmSyntaxError(number, str(e)) from None
    logger.debug("Parsed %d ops over %d qubits", len(ops), num_qubits)
    return Circuit(num_qubits, tuple(ops), name=name)


@beartype
def execute(circuit: Circuit, initial: StateVector) -> StateVector:
    """Apply the circuit to a copy of `initial`."""
    if initial.num_qubits != circuit.num_qubits:
        raise QubitCountMismatch(
            f"Circuit has {circuit.num_qubits} qubits, state has {initial.num_qubits}"
        )
    state = initial.copy()
    for op in circuit.ops:
        apply(state, op)
    return state
