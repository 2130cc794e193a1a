# database.py
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from logging import getLogger
from typing import NamedTuple

from beartype import beartype

from . import utils
from .circuit import Circuit, CircuitBuilder
from .dna import DnaString, encode_pattern, substrings
from .errors import LayoutInvalid, LengthMismatch

logger = getLogger(__name__)


class Memory(NamedTuple):
    index: int
    bits: str  # encoded window, most significant bit first
    window: DnaString


def tag_qubits(n: int, m: int) -> int:
    """Tag register size able to address all N-M+1 windows.

    The closed form ceil(log2(N-M)) is one qubit short when N-M is a power
    of two, so the larger of both counts is used.
    """
    return max(utils.ceil_log2(n - m), utils.ceil_log2(n - m + 1))


@dataclass(frozen=True, slots=True)
class QuantumDatabase:
    """Layout of the two-register phone directory.

    Tag qubits occupy 0..q_t-1, data qubits q_t..q_t+q_d-1. Data qubit j
    holds bit j of the encoded window, so the first base sits on the two
    highest data qubits.
    """

    q_t: int
    q_d: int
    memories: tuple[Memory, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "memories", tuple(self.memories))
        if self.q_t < 0 or self.q_d < 1 or self.q_d % 2:
            raise LayoutInvalid(f"Invalid register sizes q_t={self.q_t}, q_d={self.q_d}")
        seen: set[int] = set()
        for memory in self.memories:
            if not 0 <= memory.index < 1 << self.q_t:
                raise LayoutInvalid(
                    f"Memory index {memory.index} not addressable with {self.q_t} tag qubits"
                )
            if memory.index in seen:
                raise LayoutInvalid(f"Memory index {memory.index} stored twice")
            if len(memory.bits) != self.q_d or set(memory.bits) - {"0", "1"}:
                raise LayoutInvalid(
                    f"Memory {memory.index} bits {memory.bits!r} do not fill {self.q_d} data qubits"
                )
            seen.add(memory.index)

    @property
    def num_qubits(self) -> int:
        return self.q_t + self.q_d

    @property
    def pattern_length(self) -> int:
        return self.q_d // 2

    @property
    def tag_register(self) -> tuple[int, ...]:
        return tuple(range(self.q_t))

    @property
    def data_register(self) -> tuple[int, ...]:
        return tuple(range(self.q_t, self.q_t + self.q_d))

    @property
    def stored_tags(self) -> tuple[int, ...]:
        return tuple(memory.index for memory in self.memories)

    @property
    def spurious_tags(self) -> tuple[int, ...]:
        stored = set(self.stored_tags)
        return tuple(t for t in range(1 << self.q_t) if t not in stored)

    def data_qubits_set(self, value: int) -> list[int]:
        """Data qubits that are 1 for an encoded value."""
        return [self.q_t + j for j in range(self.q_d) if value >> j & 1]

    def tag_qubits_clear(self, index: int) -> list[int]:
        """Tag qubits that are 0 for a tag value, to be X-dressed."""
        return [j for j in range(self.q_t) if not index >> j & 1]

    def __repr__(self) -> str:
        return (
            f"<QuantumDatabase: q_t={self.q_t} q_d={self.q_d} "
            f"{len(self.memories)} memories>"
        )


@beartype
def build_database(
    reference: str, m: int, exclusions: Iterable[int] = ()
) -> QuantumDatabase:
    """Store every length-m window of the reference except the excluded indices."""
    windows = substrings(reference, m)
    excluded = set(exclusions)
    unknown = excluded - {i for i, _ in windows}
    if unknown:
        logger.warning("Excluded indices %s are not windows", sorted(unknown))
    memories = tuple(
        Memory(i, encode_pattern(window), window)
        for i, window in windows
        if i not in excluded
    )
    db = QuantumDatabase(tag_qubits(len(reference), m), 2 * m, memories)
    if db.spurious_tags:
        logger.info("%d spurious tags keep an all-zero data register", len(db.spurious_tags))
    logger.info("Built %r", db)
    return db


@beartype
def build_loading_circuit(db: QuantumDatabase) -> Circuit:
    """Write each memory's bits into the data register, conditioned on its tag."""
    builder = CircuitBuilder(db.num_qubits)
    tags = db.tag_register
    for memory in db.memories:
        targets = db.data_qubits_set(int(memory.bits, 2))
        if not targets:
            continue
        dressing = db.tag_qubits_clear(memory.index)
        builder.x(*dressing)
        for target in targets:
            builder.mcx(tags, target)
        builder.x(*dressing)
    return builder.build("load")


@beartype
def build_qpd_circuit(db: QuantumDatabase) -> Circuit:
    """Hadamard the tag register, then load the memories."""
    builder = CircuitBuilder(db.num_qubits).h(*db.tag_register)
    builder.extend(build_loading_circuit(db))
    return builder.build("qpd")


@beartype
def build_hamming_evolution(query: str, db: QuantumDatabase) -> Circuit:
    """XOR the classical query encoding into the data register."""
    query = DnaString(query)
    if len(query) != db.pattern_length:
        raise LengthMismatch(
            f"Query length {len(query)} != stored pattern length {db.pattern_length}"
        )
    builder = CircuitBuilder(db.num_qubits).x(*db.data_qubits_set(query.value))
    return builder.build("hamming")


@beartype
def build_preparation(db: QuantumDatabase, query: str) -> Circuit:
    """Directory initialisation followed by the Hamming evolution."""
    prep = build_qpd_circuit(db) + build_hamming_evolution(query, db)
    return Circuit(prep.num_qubits, prep.ops, name="preparation")
