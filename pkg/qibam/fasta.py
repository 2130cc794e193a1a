# fasta.py
"""Reader for the FASTA subset: '>' header lines followed by sequence lines.

Only the first record is used. Sequences are upper-cased and must contain
nothing but A, C, G and T.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from logging import getLogger
from pathlib import Path
from typing import NamedTuple

from beartype import beartype

from .dna import DnaString
from .errors import FastaError, InvalidBase

logger = getLogger(__name__)


class FastaRecord(NamedTuple):
    identifier: str
    description: str
    sequence: DnaString


def _records(lines: Iterable[str]) -> Iterator[tuple[str, list[tuple[int, str]]]]:
    header: str | None = None
    chunks: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            if header is not None:
                yield header, chunks
            header, chunks = line[1:].strip(), []
        elif header is None:
            raise FastaError(f"line {lineno}: sequence data before the first '>' header")
        else:
            chunks.append((lineno, line))
    if header is not None:
        yield header, chunks


@beartype
def parse_fasta(text: str) -> FastaRecord:
    """First record of a FASTA text."""
    record = next(_records(text.splitlines()), None)
    if record is None:
        raise FastaError("No '>' record found")
    header, chunks = record
    identifier, _, description = header.partition(" ")
    sequence = "".join(chunk for _, chunk in chunks)
    if not sequence:
        raise FastaError(f"Record {identifier!r} has an empty sequence")
    try:
        dna = DnaString(sequence)
    except InvalidBase as e:
        lineno, column = _locate(chunks, e.position)
        raise FastaError(
            f"line {lineno}: invalid base {e.base!r} at sequence position {e.position}"
            f" (column {column})"
        ) from e
    logger.info("Read record %r, %d bases", identifier, len(dna))
    return FastaRecord(identifier, description.strip(), dna)


@beartype
def read_fasta(path: str | Path) -> FastaRecord:
    path = Path(path)
    try:
        text = path.read_text()
    except UnicodeDecodeError as e:
        raise FastaError(f"{path} is not a text file") from e
    return parse_fasta(text)


def _locate(chunks: list[tuple[int, str]], position: int) -> tuple[int, int]:
    """Source line and 1-based column of a position in the joined sequence."""
    for lineno, chunk in chunks:
        if position < len(chunk):
            return lineno, position + 1
        position -= len(chunk)
    return chunks[-1][0], len(chunks[-1][1]) + 1
