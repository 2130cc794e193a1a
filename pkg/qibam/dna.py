# dna.py
from __future__ import annotations

from beartype import beartype

from . import utils
from .const import BASE_BITS, BASE_CODES
from .errors import InvalidBase, LengthMismatch, PatternLongerThanReference


class DnaString(str):
    """Non-empty upper-case string over {A, C, G, T}."""

    __slots__ = ()

    def __new__(cls, bases: str) -> DnaString:
        if isinstance(bases, DnaString):
            return bases
        normalized = bases.upper()
        if not normalized:
            raise InvalidBase(0, "")
        for position, base in enumerate(normalized):
            if base not in BASE_CODES:
                raise InvalidBase(position, bases[position])
        return super().__new__(cls, normalized)

    @property
    def value(self) -> int:
        """Encoded integer, first base in the most significant bit pair."""
        rv = 0
        for base in self:
            rv = (rv << BASE_BITS) | BASE_CODES[base]
        return rv

    @property
    def bit_length(self) -> int:
        return BASE_BITS * len(self)

    def __repr__(self) -> str:
        return f"DnaString({str(self)!r})"


@beartype
def encode_pattern(p: str) -> str:
    """A->00, C->01, G->10, T->11, first base first: "CA" -> "0100"."""
    pattern = DnaString(p)
    return format(pattern.value, f"0{pattern.bit_length}b")


@beartype
def hamming_distance(a: str, b: str) -> int:
    """Differing bits between the binary encodings of two equal-length strings."""
    a, b = DnaString(a), DnaString(b)
    if len(a) != len(b):
        raise LengthMismatch(f"Lengths differ: {len(a)} != {len(b)}")
    return utils.popcount(a.value ^ b.value)


@beartype
def substrings(reference: str, m: int) -> list[tuple[int, DnaString]]:
    """All N-M+1 windows T_M(i) of the reference, in index order."""
    reference = DnaString(reference)
    if m > len(reference):
        raise PatternLongerThanReference(
            f"Pattern length {m} exceeds reference length {len(reference)}"
        )
    if m < 1:
        raise LengthMismatch(f"Window length must be positive, got {m}")
    return [
        (i, DnaString(window)) for i, window in utils.iter_windows(reference, m)
    ]
