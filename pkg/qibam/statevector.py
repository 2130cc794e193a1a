# statevector.py
from __future__ import annotations

import cmath
import threading
from collections.abc import Sequence
from logging import getLogger

import numpy as np
from beartype import beartype
from cachetools import LRUCache, cached
from numpy.typing import NDArray

from . import utils
from .const import MAX_QUBITS, NORM_TOLERANCE, SHOT_BLOCK
from .errors import (
    DuplicateQubitIndex,
    InvalidQubitIndex,
    NotNormalized,
    QubitCountOutOfRange,
    ZeroShots,
)
from .gates import ControlledPhase, ControlledX, GateOp

logger = getLogger(__name__)


@cached(cache=LRUCache(maxsize=MAX_QUBITS + 1), lock=threading.Lock())
def _basis_indices(num_qubits: int) -> NDArray[np.int64]:
    """Read-only array 0..2^n - 1, shared by every state of that size."""
    idx = np.arange(1 << num_qubits, dtype=np.int64)
    idx.flags.writeable = False
    return idx


class StateVector:
    """Dense register of 2^n complex amplitudes, qubit 0 = least significant bit."""

    __slots__ = ["num_qubits", "amplitudes"]

    def __init__(self, num_qubits: int, amplitudes: NDArray[np.complex128]) -> None:
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    @classmethod
    @beartype
    def from_amplitudes(cls, amplitudes: Sequence[complex] | np.ndarray) -> StateVector:
        amps = np.array(amplitudes, dtype=np.complex128).ravel()
        num_qubits = int(amps.size).bit_length() - 1
        if amps.size < 2 or amps.size != 1 << num_qubits:
            raise QubitCountOutOfRange(
                f"Amplitude count {amps.size} is not a power of two >= 2"
            )
        _check_qubit_count(num_qubits)
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise NotNormalized(f"State is not normalized, norm^2 = {norm!r}")
        return cls(num_qubits, amps)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __repr__(self) -> str:
        return f"<StateVector: {self.num_qubits} qubits>"


def _check_qubit_count(num_qubits: int) -> None:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise QubitCountOutOfRange(
            f"{num_qubits} qubits outside the simulator range 1..{MAX_QUBITS}"
        )


def _check_qubits(state: StateVector, qubits: Sequence[int]) -> None:
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise InvalidQubitIndex(
                f"Qubit {q} outside a {state.num_qubits}-qubit register"
            )
    if len(set(qubits)) != len(qubits):
        raise DuplicateQubitIndex(f"Qubit listed twice in {list(qubits)}")


@beartype
def new_state(num_qubits: int) -> StateVector:
    """All qubits in |0>."""
    _check_qubit_count(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1
    return StateVector(num_qubits, amps)


@beartype
def apply(state: StateVector, op: GateOp) -> StateVector:
    """Evolve `state` in place by `op` and return it."""
    _check_qubits(state, op.qubits)
    amps = state.amplitudes
    idx = _basis_indices(state.num_qubits)
    match op:
        case ControlledX(controls=controls, target=target):
            cmask = utils.bit_mask(controls)
            tbit = 1 << target
            low = idx[((idx & cmask) == cmask) & ((idx & tbit) == 0)]
            high = low | tbit
            amps[low], amps[high] = amps[high], amps[low]
        case ControlledPhase(targets=targets, angle=angle):
            mask = utils.bit_mask(targets)
            amps[(idx & mask) == mask] *= cmath.exp(1j * angle)
        case _:
            _apply_dense(amps, idx, op.matrix, op.qubits)
    return state


def _apply_dense(
    amps: NDArray[np.complex128],
    idx: NDArray[np.int64],
    matrix: NDArray[np.complex128],
    qubits: tuple[int, ...],
) -> None:
    """Gather every 2^k sub-block spanned by `qubits`, multiply, scatter back."""
    local = np.arange(1 << len(qubits), dtype=np.int64)
    offsets = np.zeros_like(local)
    for b, q in enumerate(qubits):
        offsets |= ((local >> b) & 1) << q
    base = idx[(idx & utils.bit_mask(qubits)) == 0]
    blocks = base[:, None] + offsets[None, :]
    amps[blocks] = amps[blocks] @ matrix.T


@beartype
def probabilities(state: StateVector) -> NDArray[np.float64]:
    return np.abs(state.amplitudes) ** 2


@beartype
def marginal(state: StateVector, qubits: Sequence[int]) -> NDArray[np.float64]:
    """Distribution of the listed qubits, first listed = least significant."""
    _check_qubits(state, qubits)
    probs = probabilities(state)
    if not qubits:
        return np.array([probs.sum()], dtype=np.float64)
    idx = _basis_indices(state.num_qubits)
    outcome = np.zeros_like(idx)
    for b, q in enumerate(qubits):
        outcome |= ((idx >> q) & 1) << b
    return np.bincount(outcome, weights=probs, minlength=1 << len(qubits))


@beartype
def sample(
    state: StateVector, qubits: Sequence[int], shots: int, seed: int
) -> dict[int, int]:
    """Seeded shot histogram over the listed qubits.

    Shots are drawn in blocks of SHOT_BLOCK, block b using a PCG64 generator
    seeded by derive_seed(seed, b), so blocks can be drawn in any order.
    """
    if shots < 1:
        raise ZeroShots(f"Need at least one shot, got {shots}")
    dist = marginal(state, qubits)
    dist = dist / dist.sum()
    counts = np.zeros(len(dist), dtype=np.int64)
    for block, (size, _) in enumerate(utils.iter_blocks(shots, SHOT_BLOCK)):
        rng = np.random.default_rng(utils.derive_seed(seed, block))
        counts += rng.multinomial(size, dist)
    histogram = {int(k): int(c) for k, c in enumerate(counts) if c}
    logger.debug("Sampled %d shots over qubits %s", shots, list(qubits))
    return histogram
