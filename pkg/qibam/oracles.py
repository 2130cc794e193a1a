# oracles.py
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from logging import getLogger

import numpy as np
from beartype import beartype
from numpy.typing import NDArray

from .circuit import Circuit, CircuitBuilder
from .const import MAX_ORACLE_QUBITS
from .database import QuantumDatabase
from .dna import DnaString
from .errors import (
    DimensionTooLarge,
    GammaOutOfRange,
    LayoutInvalid,
    LengthMismatch,
    NoSolutions,
    SolutionsExceedSpace,
)
from .gates import ControlledPhase, DenseUnitary, GateOp, Hadamard

logger = getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DistributedQuery:
    """Binomial query over d qubits centred on `center` (MSB-first bit string).

    gamma sets the width: the amplitude at x is
    sqrt(gamma^h * (1 - gamma)^(d - h)) with h the Hamming distance to the centre.
    """

    d: int
    gamma: float
    center: str = ""

    def __post_init__(self) -> None:
        if self.d < 1:
            raise LengthMismatch(f"A distributed query needs d >= 1, got {self.d}")
        if not 0 < self.gamma < 1:
            raise GammaOutOfRange(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.gamma == 0.5:
            logger.warning("gamma = 0.5 gives a flat query, every amplitude is equal")
        center = self.center or "0" * self.d
        if len(center) != self.d or set(center) - {"0", "1"}:
            raise LengthMismatch(f"Centre {center!r} is not a {self.d}-bit string")
        object.__setattr__(self, "center", center)


@beartype
def query_state(q: DistributedQuery) -> NDArray[np.float64]:
    """Real non-negative amplitudes of |b_p> over all 2^d basis states."""
    x = np.arange(1 << q.d, dtype=np.int64) ^ int(q.center, 2)
    h = np.zeros_like(x)
    for j in range(q.d):
        h += (x >> j) & 1
    return np.sqrt(q.gamma**h * (1 - q.gamma) ** (q.d - h))


@beartype
def build_query_oracle(
    q: DistributedQuery, qubits: Sequence[int] | None = None
) -> DenseUnitary:
    """O = I - 2|b><b| on the data qubits (first listed = least significant)."""
    if q.d > MAX_ORACLE_QUBITS:
        raise DimensionTooLarge(
            f"Dense oracle over {q.d} qubits exceeds the {MAX_ORACLE_QUBITS}-qubit ceiling"
        )
    qubits = tuple(range(q.d)) if qubits is None else tuple(qubits)
    if len(qubits) != q.d:
        raise LengthMismatch(f"Oracle needs {q.d} qubits, got {len(qubits)}")
    b = query_state(q)
    matrix = np.eye(1 << q.d, dtype=np.complex128) - 2 * np.outer(b, b)
    return DenseUnitary(qubits, matrix)


def _select_basis_state(
    builder: CircuitBuilder, qubits: Sequence[int], value: int, op: GateOp
) -> None:
    """Apply `op` only to the basis state where `qubits` read `value`."""
    dressing = [q for j, q in enumerate(qubits) if not value >> j & 1]
    builder.x(*dressing).add(op).x(*dressing)


@beartype
def build_memory_oracle(db: QuantumDatabase, query: str) -> list[GateOp]:
    """Phase-flip every stored (tag, evolved data) basis state."""
    query = DnaString(query)
    if len(query) != db.pattern_length:
        raise LayoutInvalid(
            f"Query length {len(query)} != stored pattern length {db.pattern_length}"
        )
    register = db.tag_register + db.data_register
    flip = ControlledPhase(register, math.pi)
    builder = CircuitBuilder(db.num_qubits)
    for memory in db.memories:
        evolved = int(memory.bits, 2) ^ query.value
        _select_basis_state(builder, register, memory.index | evolved << db.q_t, flip)
    return list(builder.build("memory-oracle"))


def _zero_reflection(num_qubits: int) -> list[GateOp]:
    """I - 2|0><0| over the whole register."""
    register = tuple(range(num_qubits))
    builder = CircuitBuilder(num_qubits)
    _select_basis_state(builder, register, 0, ControlledPhase(register, math.pi))
    return list(builder.build())


@beartype
def build_diffusion(num_qubits: int) -> list[GateOp]:
    """Inversion about the mean, 2|s><s| - I up to a global phase."""
    walls = [Hadamard(q) for q in range(num_qubits)]
    return walls + _zero_reflection(num_qubits) + walls


@beartype
def build_state_reflection(prep: Circuit) -> list[GateOp]:
    """Reflection about prep|0>, as prep . (I - 2|0><0|) . prep^-1.

    With prep = H on every qubit this is `build_diffusion`.
    """
    return (
        list(prep.inverse()) + _zero_reflection(prep.num_qubits) + list(prep)
    )


@beartype
def grover_iterations(space_size: int, num_solutions: int) -> int:
    """floor(pi/4 * sqrt(space_size / num_solutions))."""
    if num_solutions < 1:
        raise NoSolutions(f"Need at least one solution, got {num_solutions}")
    if num_solutions >= space_size:
        raise SolutionsExceedSpace(
            f"{num_solutions} solutions in a space of {space_size}"
        )
    return math.floor(math.pi / 4 * math.sqrt(space_size / num_solutions))

