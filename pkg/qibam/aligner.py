# aligner.py
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from logging import getLogger
from typing import NamedTuple

import numpy as np
from beartype import beartype
from numpy.typing import NDArray

from . import utils
from .cache import OracleCache, default_cache
from .classical import ClassicalAlignment, classical_align
from .const import (
    BOYER_LAMBDA,
    MAX_QUBITS,
    AutoKnown,
    BoyerRandomized,
    Diffusion,
    Fixed,
    IterationPolicy,
    QueryConfig,
    Schedule,
)
from .database import build_database, build_preparation
from .dna import DnaString
from .errors import (
    InvalidIterationPolicy,
    LayoutInvalid,
    MaxRoundsExceeded,
    QubitCeilingExceeded,
    QueryTooLong,
    ZeroShots,
)
from .gates import GateOp
from .oracles import (
    DistributedQuery,
    build_diffusion,
    build_memory_oracle,
    build_state_reflection,
    grover_iterations,
)
from .qasm import execute
from .statevector import StateVector, apply, marginal, new_state, sample

logger = getLogger(__name__)

# Probabilities equal to this many decimals rank as ties
_RANK_DECIMALS = 12


@dataclass(frozen=True, slots=True)
class AlignmentResult:
    query: DnaString
    q_t: int
    q_d: int
    schedule: Schedule
    diffusion: Diffusion
    iterations: int
    shots: int
    tag_probabilities: NDArray[np.float64]
    histogram: dict[int, int]
    ranking: tuple[int, ...]
    stored_tags: tuple[int, ...]
    classical_distances: dict[int, int]
    best_index: int

    @property
    def stored_probabilities(self) -> dict[int, float]:
        return {t: float(self.tag_probabilities[t]) for t in self.stored_tags}

    def as_dict(self) -> dict[str, object]:
        return {
            "query": str(self.query),
            "q_t": self.q_t,
            "q_d": self.q_d,
            "schedule": self.schedule.value,
            "diffusion": self.diffusion.value,
            "iterations": self.iterations,
            "shots": self.shots,
            "tag_probabilities": [float(p) for p in self.tag_probabilities],
            "histogram": {str(t): c for t, c in sorted(self.histogram.items())},
            "ranking": list(self.ranking),
            "stored_tags": list(self.stored_tags),
            "classical_distances": {
                str(t): d for t, d in sorted(self.classical_distances.items())
            },
            "best_index": self.best_index,
        }


class BoyerOutcome(NamedTuple):
    tag: int | None
    verified: bool
    rounds: int


class Aligner:
    """One read against one reference, prepared once and run many times.

    The database, its preparation circuit and the prepared state are built
    on construction; `run` then only replays the iteration schedule.
    """

    __slots__ = [
        "reference",
        "query",
        "db",
        "classical",
        "_cache",
        "_preparation",
        "_prepared",
        "_reflections",
        "_memory_oracle",
    ]

    # ######################### Public API ################################

    @beartype
    def __init__(
        self,
        reference: str,
        query: str,
        exclusions: Iterable[int] = (),
        cache: OracleCache | None = None,
    ) -> None:
        self.reference = DnaString(reference)
        self.query = DnaString(query)
        if len(self.query) > len(self.reference):
            raise QueryTooLong(
                f"Query length {len(self.query)} exceeds reference length "
                f"{len(self.reference)}"
            )
        self.db = build_database(self.reference, len(self.query), exclusions)
        if not self.db.memories:
            raise LayoutInvalid("Every window is excluded, nothing to search")
        if self.db.num_qubits > MAX_QUBITS:
            raise QubitCeilingExceeded(
                f"{self.db.num_qubits} qubits needed, the simulator holds {MAX_QUBITS}"
            )
        self.classical = classical_align(self.reference, self.query)
        self._cache = default_cache if cache is None else cache
        self._preparation = build_preparation(self.db, self.query)
        self._prepared = execute(self._preparation, new_state(self.db.num_qubits))
        self._reflections: dict[Diffusion, list[GateOp]] = {}
        self._memory_oracle: list[GateOp] | None = None

    @property
    def prepared_state(self) -> StateVector:
        return self._prepared.copy()

    @beartype
    def iterations_for(self, policy: IterationPolicy) -> int:
        match policy:
            case Fixed(k=k):
                if k < 0:
                    raise InvalidIterationPolicy(f"Negative iteration count {k}")
                return k
            case AutoKnown(num_solutions=s):
                k = grover_iterations(1 << self.db.q_t, s)
                logger.info("%d known solution(s) over %d tags: %d iterations", s, 1 << self.db.q_t, k)
                return k
            case _:
                raise InvalidIterationPolicy(
                    "Randomized iterations run through boyer_search, not align"
                )

    @beartype
    def run(self, cfg: QueryConfig = QueryConfig()) -> AlignmentResult:
        """Amplify, then read the tag register exactly and by sampling."""
        if cfg.shots < 1:
            raise ZeroShots(f"Need at least one shot, got {cfg.shots}")
        k = self.iterations_for(cfg.iterations)
        state = self.prepared_state
        for ops in self._schedule(cfg, k):
            for op in ops:
                apply(state, op)
        tags = self.db.tag_register
        probs = marginal(state, tags)
        histogram = sample(state, tags, cfg.shots, cfg.seed)
        ranking = tuple(
            sorted(
                range(len(probs)),
                key=lambda t: (-round(float(probs[t]), _RANK_DECIMALS), t),
            )
        )
        stored = set(self.db.stored_tags)
        best_index = next(t for t in ranking if t in stored)
        return AlignmentResult(
            query=self.query,
            q_t=self.db.q_t,
            q_d=self.db.q_d,
            schedule=cfg.schedule,
            diffusion=cfg.diffusion,
            iterations=k,
            shots=cfg.shots,
            tag_probabilities=probs,
            histogram=histogram,
            ranking=ranking,
            stored_tags=self.db.stored_tags,
            classical_distances={
                t: self.classical.distances[t] for t in self.db.stored_tags
            },
            best_index=best_index,
        )

    @beartype
    def boyer_search(self, cfg: QueryConfig) -> BoyerOutcome:
        """Randomized iteration counts for an unknown number of solutions.

        Round r draws k uniformly below m_r, measures one shot after k
        iterations and checks the tag classically; m grows by BOYER_LAMBDA
        up to sqrt(2^q_t).
        """
        policy = cfg.iterations
        if not isinstance(policy, BoyerRandomized):
            raise InvalidIterationPolicy(f"boyer_search needs BoyerRandomized, got {policy!r}")
        rng = np.random.default_rng(utils.derive_seed(policy.seed))
        ceiling = math.sqrt(1 << self.db.q_t)
        target = min(self.classical.distances[t] for t in self.db.stored_tags)
        best: BoyerOutcome = BoyerOutcome(None, False, 0)
        best_distance = math.inf
        m = 1.0
        for round_ in range(1, policy.max_rounds + 1):
            k = int(rng.integers(0, math.ceil(m)))
            shot_cfg = cfg._replace(
                iterations=Fixed(k),
                shots=1,
                seed=utils.derive_seed(policy.seed, round_),
            )
            (tag,) = self.run(shot_cfg).histogram
            distance = self._distance_of(tag)
            logger.debug("Round %d: k=%d measured tag %d (distance %s)", round_, k, tag, distance)
            if distance == target:
                logger.info("Verified tag %d after %d round(s)", tag, round_)
                return BoyerOutcome(tag, True, round_)
            if distance < best_distance:
                best, best_distance = BoyerOutcome(tag, False, round_), distance
            m = min(BOYER_LAMBDA * m, ceiling)
        logger.warning("No verified match in %d rounds", policy.max_rounds)
        raise MaxRoundsExceeded(
            f"No verified match within {policy.max_rounds} rounds",
            best._replace(rounds=policy.max_rounds),
        )

    def __repr__(self) -> str:
        return f"<Aligner: {len(self.query)}-mer over {len(self.reference)} bases {self.db!r}>"

    # ####################### Implementation ##############################

    def _distance_of(self, tag: int) -> float:
        """Classical distance of a measured tag, infinite for spurious tags."""
        if tag in set(self.db.stored_tags):
            return self.classical.distances[tag]
        return math.inf

    def _query_oracle(self, gamma: float) -> GateOp:
        query = DistributedQuery(self.db.q_d, gamma)
        return self._cache.get_query_oracle(query, self.db.data_register)

    def _reflection(self, diffusion: Diffusion) -> list[GateOp]:
        if diffusion not in self._reflections:
            if diffusion is Diffusion.DATABASE:
                ops = build_state_reflection(self._preparation)
            else:
                ops = build_diffusion(self.db.num_qubits)
            self._reflections[diffusion] = ops
        return self._reflections[diffusion]

    def _memory_marks(self) -> list[GateOp]:
        if self._memory_oracle is None:
            self._memory_oracle = build_memory_oracle(self.db, self.query)
        return self._memory_oracle

    def _schedule(self, cfg: QueryConfig, k: int) -> Iterator[list[GateOp]]:
        """Oracle/diffusion pairs in application order."""
        reflection = self._reflection(cfg.diffusion)
        query_step = [self._query_oracle(cfg.gamma), *reflection]
        for i in range(k):
            if cfg.schedule is Schedule.TWO_PHASE and i > 0:
                yield [*self._memory_marks(), *reflection]
            else:
                yield query_step


@beartype
def align(
    reference: str,
    query: str,
    cfg: QueryConfig = QueryConfig(),
    exclusions: Iterable[int] = (),
) -> AlignmentResult:
    return Aligner(reference, query, exclusions).run(cfg)


@beartype
def boyer_search(
    reference: str,
    query: str,
    cfg: QueryConfig,
    exclusions: Iterable[int] = (),
) -> BoyerOutcome:
    return Aligner(reference, query, exclusions).boyer_search(cfg)


__all__ = [
    "AlignmentResult",
    "Aligner",
    "BoyerOutcome",
    "ClassicalAlignment",
    "align",
    "boyer_search",
]
