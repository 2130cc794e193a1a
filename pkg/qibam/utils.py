import hashlib
from typing import Iterator, Sequence, Tuple


def iter_windows(sequence: str, n: int) -> Iterator[Tuple[int, str]]:
    """Yield every length-n window of a sequence with its start index.

    "ACGT", 2 -> (0, 'AC'), (1, 'CG'), (2, 'GT')
    """
    for start in range(len(sequence) - n + 1):
        yield start, sequence[start : start + n]


def iter_blocks(total: int, n: int) -> Iterator[Tuple[int, bool]]:
    """Yield block sizes of at most n summing to total and says if each block is the last one.

    10, 4 -> (4, False), (4, False), (2, True)
    """
    start = 0
    while start < total:
        size = min(n, total - start)
        start += size
        yield size, start >= total


def ceil_log2(value: int) -> int:
    """Number of bits needed to address `value` distinct items, 0 for value <= 1."""
    if value <= 1:
        return 0
    return (value - 1).bit_length()


def popcount(value: int) -> int:
    return value.bit_count()


def bit_mask(qubits: Sequence[int]) -> int:
    mask = 0
    for q in qubits:
        mask |= 1 << q
    return mask


def derive_seed(seed: int, *keys: int) -> int:
    """Hash a seed and a path of integer keys into an independent 64-bit seed.

    Same inputs give the same sub-seed on every platform and run.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in (seed, *keys):
        h.update(part.to_bytes(16, "little", signed=True))
    return int.from_bytes(h.digest(), "little")
