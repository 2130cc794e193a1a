import enum
from typing import NamedTuple

VERSION = "0.1.0"

# Schema of the JSON reports written by the command line
SCHEMA_VERSION = 1

# Norm and unitarity checks
NORM_TOLERANCE = 1e-10

# Amplitude-wise equality between two evolutions of the same state
EQUALITY_TOLERANCE = 1e-12

# Dense storage needs 16 bytes per amplitude, 26 qubits is 1 GiB
MAX_QUBITS = 26

# The distributed-query oracle is kept as a dense 2^d x 2^d matrix
MAX_ORACLE_QUBITS = 12

# Shots drawn per generator when sampling histograms
SHOT_BLOCK = 4096

# Growth factor of the randomized iteration bound
BOYER_LAMBDA = 6 / 5

# Two bits per nucleotide, first base in the most significant pair
BASE_BITS = 2
BASE_CODES = {"A": 0b00, "C": 0b01, "G": 0b10, "T": 0b11}

DEFAULT_GAMMA = 0.25
DEFAULT_SHOTS = 1024


class Schedule(enum.Enum):
    SINGLE_QUERY = "single"
    TWO_PHASE = "two-phase"


class Diffusion(enum.Enum):
    DATABASE = "database"  # reflect about the prepared database state
    UNIFORM = "uniform"  # reflect about the uniform superposition


class Fixed(NamedTuple):
    k: int


class AutoKnown(NamedTuple):
    num_solutions: int = 1


class BoyerRandomized(NamedTuple):
    max_rounds: int = 30
    seed: int = 0


IterationPolicy = Fixed | AutoKnown | BoyerRandomized


class QueryConfig(NamedTuple):
    gamma: float = DEFAULT_GAMMA
    schedule: Schedule = Schedule.TWO_PHASE
    iterations: IterationPolicy = Fixed(1)
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    diffusion: Diffusion = Diffusion.DATABASE
