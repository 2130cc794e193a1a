import itertools
import json
import time

import numpy as np
import pytest

from conftest import SECTION_QUERY, SECTION_REFERENCE, SUPER_STRING
from qibam.aligner import Aligner, AlignmentResult, BoyerOutcome, align, boyer_search
from qibam.cache import OracleCache, default_cache
from qibam.const import (
    AutoKnown,
    BoyerRandomized,
    Diffusion,
    Fixed,
    QueryConfig,
    Schedule,
)
from qibam.errors import (
    DimensionTooLarge,
    InvalidIterationPolicy,
    LayoutInvalid,
    MaxRoundsExceeded,
    QubitCeilingExceeded,
    QueryTooLong,
    ZeroShots,
)


def envelope_violations(result: AlignmentResult) -> list[tuple[int, int]]:
    """Stored tag pairs whose probabilities disagree with their distances."""
    probs = result.stored_probabilities
    distances = result.classical_distances
    bad = []
    for i, j in itertools.permutations(result.stored_tags, 2):
        if distances[i] < distances[j] and probs[i] < probs[j] - 1e-12:
            bad.append((i, j))
        if distances[i] == distances[j] and abs(probs[i] - probs[j]) > 1e-9:
            bad.append((i, j))
    return bad


def test_section_reproduction() -> None:
    started = time.perf_counter()
    result = align(SECTION_REFERENCE, SECTION_QUERY, QueryConfig(gamma=0.25, iterations=Fixed(1)))
    assert time.perf_counter() - started < 1

    assert (result.q_t, result.q_d) == (4, 4)
    assert result.schedule is Schedule.TWO_PHASE
    assert result.iterations == 1
    assert result.stored_tags == tuple(range(15))
    assert envelope_violations(result) == []

    probs = result.stored_probabilities
    nearest = {0, 7, 11, 14}
    distance_two = [t for t in result.stored_tags if result.classical_distances[t] == 2]
    assert len(distance_two) == 6
    for t in nearest:
        assert result.classical_distances[t] == 1
        assert all(probs[t] > probs[u] for u in distance_two)

    stored_ranking = [t for t in result.ranking if t in set(result.stored_tags)]
    assert set(stored_ranking[:4]) == nearest
    assert result.best_index in nearest


@pytest.mark.parametrize(
    "query", ["".join(pair) for pair in itertools.product("ACGT", repeat=2)]
)
def test_envelope_for_every_query(query: str) -> None:
    aligner = Aligner(SECTION_REFERENCE, query)
    result = aligner.run(QueryConfig(iterations=Fixed(1), shots=64))
    assert envelope_violations(result) == []
    assert result.best_index in aligner.classical.min_indices
    assert abs(result.tag_probabilities.sum() - 1) <= 1e-9


def test_exact_match_recall() -> None:
    cfg = QueryConfig(
        gamma=0.1,
        schedule=Schedule.SINGLE_QUERY,
        iterations=AutoKnown(1),
    )
    result = align(SUPER_STRING, "CA", cfg)
    assert result.iterations == 3
    assert result.stored_tags == tuple(range(16))
    assert result.best_index == 15
    assert result.ranking[0] == 15
    others = np.delete(result.tag_probabilities, 15)
    assert result.tag_probabilities[15] > others.max() + 0.1
    assert result.classical_distances[15] == 0


def test_whole_reference_query() -> None:
    result = align("ACGT", "ACGT")
    assert result.q_t == 0
    assert result.best_index == 0
    assert result.ranking == (0,)
    assert result.histogram == {0: result.shots}
    assert result.tag_probabilities.tolist() == pytest.approx([1.0])


def test_probability_conservation_and_histogram() -> None:
    cfg = QueryConfig(iterations=Fixed(3), shots=5000, seed=11)
    result = align(SECTION_REFERENCE, SECTION_QUERY, cfg)
    assert abs(result.tag_probabilities.sum() - 1) <= 1e-9
    assert len(result.tag_probabilities) == 16
    assert sum(result.histogram.values()) == 5000
    assert set(result.histogram) <= set(range(16))
    assert align(SECTION_REFERENCE, SECTION_QUERY, cfg).histogram == result.histogram


def test_schedules_differ_after_the_first_iteration() -> None:
    aligner = Aligner(SECTION_REFERENCE, SECTION_QUERY)
    one = [
        aligner.run(QueryConfig(schedule=s, iterations=Fixed(1))).tag_probabilities
        for s in Schedule
    ]
    np.testing.assert_allclose(one[0], one[1], atol=1e-12)
    two = [
        aligner.run(QueryConfig(schedule=s, iterations=Fixed(2))).tag_probabilities
        for s in Schedule
    ]
    assert np.max(np.abs(two[0] - two[1])) > 1e-6
    for probs in two:
        assert abs(probs.sum() - 1) <= 1e-9


def test_zero_iterations_measure_the_database() -> None:
    result = align(SECTION_REFERENCE, SECTION_QUERY, QueryConfig(iterations=Fixed(0)))
    np.testing.assert_allclose(result.tag_probabilities, [1 / 16] * 16, atol=1e-12)
    assert result.best_index == 0


def test_uniform_diffusion_with_a_sharp_query() -> None:
    cfg = QueryConfig(gamma=0.1, diffusion=Diffusion.UNIFORM, iterations=Fixed(1))
    result = align(SECTION_REFERENCE, SECTION_QUERY, cfg)
    assert result.diffusion is Diffusion.UNIFORM
    assert envelope_violations(result) == []


def test_uniform_diffusion_inverts_a_wide_query() -> None:
    cfg = QueryConfig(gamma=0.25, diffusion=Diffusion.UNIFORM, iterations=Fixed(1))
    result = align(SECTION_REFERENCE, SECTION_QUERY, cfg)
    probs = result.stored_probabilities
    assert max(probs, key=probs.__getitem__) == 4
    assert result.classical_distances[4] == 4


def test_exclusions() -> None:
    result = align(SECTION_REFERENCE, SECTION_QUERY, exclusions=[14])
    assert 14 not in result.stored_tags
    assert 14 not in result.classical_distances
    assert result.best_index in {0, 7, 11}


def test_aligner_reuses_cached_oracle() -> None:
    aligner = Aligner(SECTION_REFERENCE, SECTION_QUERY)
    aligner.run()
    aligner.run(QueryConfig(seed=3))
    Aligner(SECTION_REFERENCE, "GT").run()
    assert len(default_cache) == 1
    assert (default_cache.hits, default_cache.misses) == (2, 1)
    assert "2-mer over 16 bases" in repr(aligner)


def test_aligner_private_cache() -> None:
    cache = OracleCache()
    Aligner(SECTION_REFERENCE, SECTION_QUERY, cache=cache).run()
    assert len(cache) == 1
    assert len(default_cache) == 0


def test_prepared_state_is_not_shared() -> None:
    aligner = Aligner(SECTION_REFERENCE, SECTION_QUERY)
    state = aligner.prepared_state
    state.amplitudes[:] = 0
    assert abs(aligner.prepared_state.norm - 1) <= 1e-10


def test_as_dict_is_json_ready() -> None:
    result = align(SECTION_REFERENCE, SECTION_QUERY, QueryConfig(shots=100))
    report = json.loads(json.dumps(result.as_dict()))
    assert report["query"] == "CA"
    assert report["schedule"] == "two-phase"
    assert report["diffusion"] == "database"
    assert report["classical_distances"]["0"] == 1
    assert sum(report["histogram"].values()) == 100
    assert len(report["tag_probabilities"]) == 16


@pytest.mark.parametrize(
    "reference,query,error",
    [
        ("AC", "ACG", QueryTooLong),
        ("A" * 17, "A" * 12, QubitCeilingExceeded),
    ],
)
def test_construction_errors(reference: str, query: str, error: type[Exception]) -> None:
    with pytest.raises(error):
        Aligner(reference, query)


def test_everything_excluded() -> None:
    with pytest.raises(LayoutInvalid):
        Aligner("ACG", "ACG", exclusions=[0])


def test_dense_oracle_ceiling() -> None:
    aligner = Aligner("ACGTACGT", "ACGTACG")
    with pytest.raises(DimensionTooLarge):
        aligner.run()


def test_run_errors() -> None:
    aligner = Aligner(SECTION_REFERENCE, SECTION_QUERY)
    with pytest.raises(ZeroShots):
        aligner.run(QueryConfig(shots=0))
    with pytest.raises(InvalidIterationPolicy):
        aligner.run(QueryConfig(iterations=Fixed(-1)))
    with pytest.raises(InvalidIterationPolicy):
        aligner.run(QueryConfig(iterations=BoyerRandomized()))
    with pytest.raises(InvalidIterationPolicy):
        aligner.boyer_search(QueryConfig(iterations=Fixed(1)))


def test_auto_known_uses_the_tag_register(caplog: pytest.LogCaptureFixture) -> None:
    caplog.set_level("INFO")
    aligner = Aligner(SECTION_REFERENCE, SECTION_QUERY)
    assert aligner.iterations_for(AutoKnown(1)) == 3
    assert aligner.iterations_for(AutoKnown(4)) == 1
    assert "iterations" in caplog.text


def boyer_config(seed: int, max_rounds: int = 30) -> QueryConfig:
    return QueryConfig(
        gamma=0.1,
        schedule=Schedule.SINGLE_QUERY,
        iterations=BoyerRandomized(max_rounds=max_rounds, seed=seed),
    )


def test_boyer_search_finds_the_exact_match() -> None:
    aligner = Aligner(SUPER_STRING, "CA")
    verified = 0
    for seed in range(50):
        try:
            outcome = aligner.boyer_search(boyer_config(seed))
        except MaxRoundsExceeded:
            continue
        assert outcome.tag == 15
        assert 1 <= outcome.rounds <= 30
        verified += outcome.verified
    assert verified >= 45


def test_boyer_search_is_deterministic() -> None:
    a = boyer_search(SUPER_STRING, "CA", boyer_config(123))
    b = boyer_search(SUPER_STRING, "CA", boyer_config(123))
    assert a == b
    assert isinstance(a, BoyerOutcome)


def test_boyer_search_without_rounds() -> None:
    with pytest.raises(MaxRoundsExceeded) as excinfo:
        boyer_search(SUPER_STRING, "CA", boyer_config(0, max_rounds=0))
    assert excinfo.value.outcome == BoyerOutcome(None, False, 0)


def test_boyer_search_reports_best_unverified_tag() -> None:
    # a single round at k = 0 rarely lands on the one exact match
    outcomes = []
    for seed in range(40):
        try:
            outcomes.append(boyer_search(SUPER_STRING, "CA", boyer_config(seed, max_rounds=1)))
        except MaxRoundsExceeded as e:
            outcome = e.outcome
            assert not outcome.verified
            assert outcome.rounds == 1
            assert outcome.tag in range(15)
            outcomes.append(outcome)
    assert any(not outcome.verified for outcome in outcomes)
