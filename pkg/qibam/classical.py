# classical.py
from __future__ import annotations

from dataclasses import dataclass

from beartype import beartype

from .dna import DnaString, hamming_distance, substrings
from .errors import PatternLongerThanReference


@dataclass(frozen=True, slots=True)
class ClassicalAlignment:
    windows: tuple[DnaString, ...]
    distances: tuple[int, ...]
    min_distance: int
    min_indices: tuple[int, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "windows": [str(w) for w in self.windows],
            "distances": list(self.distances),
            "min_distance": self.min_distance,
            "min_indices": list(self.min_indices),
        }


@beartype
def classical_align(reference: str, query: str) -> ClassicalAlignment:
    """Linear scan of every window, Hamming distance over the 2-bit encoding."""
    reference, query = DnaString(reference), DnaString(query)
    if len(query) > len(reference):
        raise PatternLongerThanReference(
            f"Query length {len(query)} exceeds reference length {len(reference)}"
        )
    windows = substrings(reference, len(query))
    distances = tuple(hamming_distance(window, query) for _, window in windows)
    min_distance = min(distances)
    return ClassicalAlignment(
        windows=tuple(window for _, window in windows),
        distances=distances,
        min_distance=min_distance,
        min_indices=tuple(i for i, d in enumerate(distances) if d == min_distance),
    )
