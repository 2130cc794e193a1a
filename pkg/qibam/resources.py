# resources.py
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from beartype import beartype

from . import utils
from .database import tag_qubits
from .errors import InvalidParameters


class GateCounts(NamedTuple):
    """H, uncontrolled-X and n-controlled-X counts of one circuit stage."""

    h: int
    c0x: int
    cnx: int
    controls: int  # n of the CnX column

    @property
    def total(self) -> int:
        return self.h + self.c0x + self.cnx

    def as_dict(self) -> dict[str, int]:
        return {"H": self.h, "C0X": self.c0x, f"C{self.controls}X": self.cnx}


@dataclass(frozen=True, slots=True)
class ResourceEstimate:
    alphabet: int
    reference_length: int
    read_length: int
    q_d: int
    q_t: int
    q_t_builder: int
    Q: int
    init_hamming: GateCounts
    query_qsd: int
    memory_mark: GateCounts
    grover_gate: GateCounts

    @property
    def totals(self) -> dict[str, int]:
        return {
            "init_hamming": self.init_hamming.total,
            "query_qsd": self.query_qsd,
            "memory_mark": self.memory_mark.total,
            "grover_gate": self.grover_gate.total,
        }

    def as_dict(self) -> dict[str, object]:
        return {
            "A": self.alphabet,
            "N": self.reference_length,
            "M": self.read_length,
            "q_d": self.q_d,
            "q_t": self.q_t,
            "q_t_builder": self.q_t_builder,
            "Q": self.Q,
            "init_hamming": self.init_hamming.as_dict(),
            "query_qsd": self.query_qsd,
            "memory_mark": self.memory_mark.as_dict(),
            "grover_gate": self.grover_gate.as_dict(),
            "totals": self.totals,
        }


@beartype
def estimate(A: int, N: int, M: int) -> ResourceEstimate:
    """Closed-form qubit and gate counts for reads of length M over a length-N reference.

    Exact integers throughout. q_t follows the closed form ceil(log2(N - M));
    `q_t_builder` is the count the database builder actually allocates. The
    data-qubit term of the loading stage is an average (half the data bits
    set) and rounds half up.
    """
    if A < 2:
        raise InvalidParameters(f"Alphabet size must be >= 2, got {A}")
    if M < 1:
        raise InvalidParameters(f"Read length must be >= 1, got {M}")
    if N <= M:
        raise InvalidParameters(f"Reference length {N} must exceed read length {M}")

    q_d = M * utils.ceil_log2(A)
    q_t = utils.ceil_log2(N - M)
    tags = 1 << q_t
    width = q_d + q_t
    grover_controls = width - 1

    init_hamming = GateCounts(q_t, q_t * tags, (q_t * q_d + 1) // 2, q_t)
    # Shannon decomposition of a unitary on n = q_d qubits
    query_qsd = 3 * (4 ** (q_d - 1) - 2 ** (q_d - 1))
    memory_mark = GateCounts(2 * tags, (M + q_t) * tags, tags, grover_controls)
    grover_gate = GateCounts(2 * width + 2, 2 * width, 1, grover_controls)

    return ResourceEstimate(
        alphabet=A,
        reference_length=N,
        read_length=M,
        q_d=q_d,
        q_t=q_t,
        q_t_builder=tag_qubits(N, M),
        Q=width + 1,
        init_hamming=init_hamming,
        query_qsd=query_qsd,
        memory_mark=memory_mark,
        grover_gate=grover_gate,
    )
