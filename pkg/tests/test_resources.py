import pytest

from qibam.errors import InvalidParameters
from qibam.resources import GateCounts, estimate


def test_genome_scale_estimate() -> None:
    result = estimate(4, 3_000_000_000, 50)
    assert result.q_d == 100
    assert result.q_t == 32
    assert result.Q == 133
    assert result.init_hamming == GateCounts(32, 32 * 2**32, 1600, 32)
    assert result.memory_mark.h == 2 * 2**32
    assert result.query_qsd == 3 * (4**99 - 2**99)


def test_section_estimate() -> None:
    result = estimate(4, 16, 2)
    assert (result.q_t, result.q_d, result.Q) == (4, 4, 9)
    assert result.q_t_builder == 4
    assert result.init_hamming.as_dict() == {"H": 4, "C0X": 64, "C4X": 8}
    assert result.query_qsd == 168
    assert result.memory_mark.as_dict() == {"H": 32, "C0X": 96, "C7X": 16}
    assert result.grover_gate.as_dict() == {"H": 18, "C0X": 16, "C7X": 1}
    assert result.totals == {
        "init_hamming": 76,
        "query_qsd": 168,
        "memory_mark": 144,
        "grover_gate": 35,
    }


def test_closed_form_tag_count_can_fall_short() -> None:
    # 17 windows need 5 tag qubits, the closed form gives 4
    result = estimate(4, 18, 2)
    assert result.q_t == 4
    assert result.q_t_builder == 5


def test_average_term_rounds_half_up() -> None:
    # q_t * q_d / 2 is 4 / 2 and 3 / 2 here
    result = estimate(2, 10, 1)
    assert (result.q_t, result.q_d) == (4, 1)
    assert result.init_hamming.cnx == 2
    result = estimate(2, 9, 1)
    assert (result.q_t, result.q_d) == (3, 1)
    assert result.init_hamming.cnx == 2


def test_monotone_in_reference_and_read_length() -> None:
    for m in range(1, 8):
        qs = [estimate(4, n, m).Q for n in range(m + 1, 200)]
        assert qs == sorted(qs)
    for n in (50, 300):
        qs = [estimate(4, n, m).Q for m in range(1, min(n, 40))]
        assert qs == sorted(qs)


def test_as_dict() -> None:
    report = estimate(4, 16, 2).as_dict()
    assert report["Q"] == 9
    assert report["query_qsd"] == 168
    assert report["init_hamming"] == {"H": 4, "C0X": 64, "C4X": 8}


@pytest.mark.parametrize("a,n,m", [(1, 16, 2), (4, 16, 0), (4, 2, 2), (4, 1, 2)])
def test_invalid_parameters(a: int, n: int, m: int) -> None:
    with pytest.raises(InvalidParameters):
        estimate(a, n, m)
