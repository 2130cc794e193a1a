# gates.py
from __future__ import annotations

import abc
import cmath
import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from numpy.typing import NDArray

from .const import NORM_TOLERANCE
from .errors import (
    DuplicateQubitIndex,
    InvalidQubitIndex,
    NonUnitaryMatrix,
    UnsupportedOpForSerialization,
)

_SQRT1_2 = 1 / math.sqrt(2)


def format_angle(angle: float) -> str:
    """17 significant digits survive a float round-trip."""
    return format(angle, ".17g")


def _check_qubits(qubits: tuple[int, ...]) -> None:
    for q in qubits:
        if q < 0:
            raise InvalidQubitIndex(f"Negative qubit index {q}")
    if len(set(qubits)) != len(qubits):
        raise DuplicateQubitIndex(f"Qubit listed twice in {list(qubits)}")


def _operands(qubits: tuple[int, ...]) -> str:
    return ",".join(f"q[{q}]" for q in qubits)


class GateOp(metaclass=abc.ABCMeta):
    """One operation of a circuit.

    Qubit 0 is the least significant bit of a basis-state index. `matrix`
    is expressed over `qubits` in listed order, the first listed qubit
    being the least significant bit of the row/column index.
    """

    __slots__ = ()

    kind: ClassVar[str] = ""

    @property
    @abc.abstractmethod
    def qubits(self) -> tuple[int, ...]:
        """Every qubit the op touches."""

    @property
    @abc.abstractmethod
    def matrix(self) -> NDArray[np.complex128]:
        """Unitary over `qubits`."""

    @abc.abstractmethod
    def inverse(self) -> GateOp:
        """Op undoing this one."""

    @abc.abstractmethod
    def dump(self) -> str:
        """Serialize the op to one cQASM line."""


@dataclass(frozen=True, slots=True)
class Hadamard(GateOp):
    qubit: int
    kind: ClassVar[str] = "H"

    def __post_init__(self) -> None:
        _check_qubits((self.qubit,))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT1_2

    def inverse(self) -> Hadamard:
        return self

    def dump(self) -> str:
        return f"h q[{self.qubit}]"


@dataclass(frozen=True, slots=True)
class RotationY(GateOp):
    qubit: int
    angle: float
    kind: ClassVar[str] = "Ry"

    def __post_init__(self) -> None:
        _check_qubits((self.qubit,))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)

    def inverse(self) -> RotationY:
        return RotationY(self.qubit, -self.angle)

    def dump(self) -> str:
        return f"ry q[{self.qubit}],{format_angle(self.angle)}"


@dataclass(frozen=True, slots=True)
class RotationZ(GateOp):
    qubit: int
    angle: float
    kind: ClassVar[str] = "Rz"

    def __post_init__(self) -> None:
        _check_qubits((self.qubit,))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        half = self.angle / 2
        return np.diag([cmath.exp(-1j * half), cmath.exp(1j * half)]).astype(
            np.complex128
        )

    def inverse(self) -> RotationZ:
        return RotationZ(self.qubit, -self.angle)

    def dump(self) -> str:
        return f"rz q[{self.qubit}],{format_angle(self.angle)}"


@dataclass(frozen=True, slots=True)
class ControlledX(GateOp):
    """X on `target` when every control is 1; no controls is a plain X."""

    controls: tuple[int, ...]
    target: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", tuple(self.controls))
        _check_qubits(self.qubits)

    @property
    def kind(self) -> str:  # type: ignore[override]
        return "ControlledX" if self.controls else "X"

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        m = len(self.controls)
        u = np.eye(1 << (m + 1), dtype=np.complex128)
        off, on = (1 << m) - 1, (1 << (m + 1)) - 1
        u[[off, on]] = u[[on, off]]
        return u

    def inverse(self) -> ControlledX:
        return self

    def dump(self) -> str:
        match len(self.controls):
            case 0:
                return f"x q[{self.target}]"
            case 1:
                return f"cnot {_operands(self.qubits)}"
            case 2:
                return f"toffoli {_operands(self.qubits)}"
            case _:
                return f"cX {_operands(self.qubits)}"


def pauli_x(qubit: int) -> ControlledX:
    return ControlledX((), qubit)


@dataclass(frozen=True, slots=True)
class ControlledPhase(GateOp):
    """Phase e^{i angle} on basis states where every listed qubit is 1."""

    targets: tuple[int, ...]
    angle: float
    kind: ClassVar[str] = "ControlledPhase"

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise InvalidQubitIndex("ControlledPhase needs at least one qubit")
        _check_qubits(self.targets)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets

    @property
    def matrix(self) -> NDArray[np.complex128]:
        diag = np.ones(1 << len(self.targets), dtype=np.complex128)
        diag[-1] = cmath.exp(1j * self.angle)
        return np.diag(diag)

    def inverse(self) -> ControlledPhase:
        return ControlledPhase(self.targets, -self.angle)

    def dump(self) -> str:
        return f"cphase {_operands(self.targets)},{format_angle(self.angle)}"


@dataclass(frozen=True, slots=True, eq=False)
class DenseUnitary(GateOp):
    """Arbitrary unitary on a qubit subset, validated at construction."""

    targets: tuple[int, ...]
    unitary: NDArray[np.complex128] = field(repr=False)
    kind: ClassVar[str] = "DenseUnitary"

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise InvalidQubitIndex("DenseUnitary needs at least one qubit")
        _check_qubits(self.targets)
        u = np.array(self.unitary, dtype=np.complex128)
        dim = 1 << len(self.targets)
        if u.shape != (dim, dim):
            raise NonUnitaryMatrix(
                f"Expected a {dim}x{dim} matrix for {len(self.targets)} qubits, "
                f"got shape {u.shape}"
            )
        drift = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
        if drift > NORM_TOLERANCE:
            raise NonUnitaryMatrix(f"Matrix is not unitary, |U'U - I| = {drift:.3g}")
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return self.unitary

    def inverse(self) -> DenseUnitary:
        return DenseUnitary(self.targets, self.unitary.conj().T)

    def dump(self) -> str:
        raise UnsupportedOpForSerialization(
            f"DenseUnitary on {list(self.targets)} has no gate-level form"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseUnitary):
            return NotImplemented
        return self.targets == other.targets and np.array_equal(
            self.unitary, other.unitary
        )

    def __hash__(self) -> int:
        return hash((self.targets, self.unitary.tobytes()))
