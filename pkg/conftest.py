from pathlib import Path

import pytest

from qibam.cache import default_cache
from qibam.database import QuantumDatabase, build_database

# Reference and query of the 16-base reproduction run
SECTION_REFERENCE = "AATTGTCTAGGCGACC"
SECTION_QUERY = "CA"

# Every 2-mer over {A, C, G, T} exactly once as a window
SUPER_STRING = "AATTGTCTAGGCGACCA"


@pytest.fixture
def section_db() -> QuantumDatabase:
    return build_database(SECTION_REFERENCE, 2)


@pytest.fixture
def fasta_file(tmp_path: Path) -> Path:
    path = tmp_path / "reference.fa"
    path.write_text(">chrT test reference\naattgtct\nAGGCGACC\n")
    return path


@pytest.fixture(autouse=True)
def fresh_oracle_cache() -> None:
    default_cache.clear()
