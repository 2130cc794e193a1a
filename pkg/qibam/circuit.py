# circuit.py
from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
from beartype import beartype

from .errors import InvalidQubitIndex
from .gates import (
    ControlledPhase,
    ControlledX,
    DenseUnitary,
    GateOp,
    Hadamard,
    RotationY,
    RotationZ,
)


@dataclass(frozen=True, slots=True)
class Circuit:
    """Immutable ordered list of ops over `num_qubits` qubits.

    Equality is structural and ignores the name label.
    """

    num_qubits: int
    ops: tuple[GateOp, ...] = ()
    name: str = field(default="circuit", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in op.qubits:
                if q >= self.num_qubits:
                    raise InvalidQubitIndex(
                        f"{op!r} touches qubit {q} of a {self.num_qubits}-qubit circuit"
                    )

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self.ops)

    def __add__(self, other: Circuit) -> Circuit:
        return Circuit(
            max(self.num_qubits, other.num_qubits),
            self.ops + other.ops,
            name=f"{self.name}+{other.name}",
        )

    @property
    def serializable(self) -> bool:
        return not any(isinstance(op, DenseUnitary) for op in self.ops)

    def inverse(self) -> Circuit:
        return Circuit(
            self.num_qubits,
            tuple(op.inverse() for op in reversed(self.ops)),
            name=f"{self.name}^-1",
        )

    def gate_counts(self) -> Counter[str]:
        """Ops per kind, multi-controlled X keyed by control count (C2X, ...)."""
        counts: Counter[str] = Counter()
        for op in self.ops:
            if isinstance(op, ControlledX):
                counts[f"C{len(op.controls)}X"] += 1
            else:
                counts[op.kind] += 1
        return counts

    def __repr__(self) -> str:
        return f"<Circuit {self.name}: {self.num_qubits} qubits, {len(self.ops)} ops>"


class CircuitBuilder:
    """Collects ops and finalizes them into an immutable Circuit."""

    __slots__ = ["num_qubits", "_ops"]

    @beartype
    def __init__(self, num_qubits: int) -> None:
        self.num_qubits = num_qubits
        self._ops: list[GateOp] = []

    @beartype
    def add(self, op: GateOp) -> CircuitBuilder:
        self._ops.append(op)
        return self

    @beartype
    def extend(self, ops: Iterable[GateOp]) -> CircuitBuilder:
        self._ops.extend(ops)
        return self

    def h(self, *qubits: int) -> CircuitBuilder:
        return self.extend(Hadamard(q) for q in qubits)

    def x(self, *qubits: int) -> CircuitBuilder:
        return self.extend(ControlledX((), q) for q in qubits)

    @beartype
    def ry(self, qubit: int, angle: float) -> CircuitBuilder:
        return self.add(RotationY(qubit, angle))

    @beartype
    def rz(self, qubit: int, angle: float) -> CircuitBuilder:
        return self.add(RotationZ(qubit, angle))

    @beartype
    def mcx(self, controls: Sequence[int], target: int) -> CircuitBuilder:
        return self.add(ControlledX(tuple(controls), target))

    @beartype
    def cphase(self, qubits: Sequence[int], angle: float) -> CircuitBuilder:
        return self.add(ControlledPhase(tuple(qubits), angle))

    @beartype
    def unitary(self, qubits: Sequence[int], matrix: np.ndarray) -> CircuitBuilder:
        return self.add(DenseUnitary(tuple(qubits), matrix))

    @beartype
    def build(self, name: str = "circuit") -> Circuit:
        return Circuit(self.num_qubits, tuple(self._ops), name=name)
