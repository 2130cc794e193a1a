import math

import numpy as np
import pytest

from conftest import SECTION_QUERY
from qibam.circuit import Circuit, CircuitBuilder
from qibam.database import QuantumDatabase, build_database, build_preparation
from qibam.errors import (
    DimensionTooLarge,
    GammaOutOfRange,
    LayoutInvalid,
    LengthMismatch,
    NoSolutions,
    SolutionsExceedSpace,
)
from qibam.gates import GateOp
from qibam.oracles import (
    DistributedQuery,
    build_diffusion,
    build_memory_oracle,
    build_query_oracle,
    build_state_reflection,
    grover_iterations,
    query_state,
)
from qibam.qasm import execute
from qibam.statevector import StateVector, apply, new_state


def run(ops: list[GateOp], state: StateVector) -> StateVector:
    state = state.copy()
    for op in ops:
        apply(state, op)
    return state


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector.from_amplitudes(amps / np.linalg.norm(amps))


def test_query_state_amplitudes() -> None:
    b = query_state(DistributedQuery(4, 0.25))
    assert b[0] == pytest.approx(0.5625, abs=1e-15)
    for weight_one in (1, 2, 4, 8):
        assert b[weight_one] == pytest.approx(math.sqrt(0.25 * 0.75**3), abs=1e-15)
    assert b[15] == pytest.approx(0.0625, abs=1e-15)
    assert (b >= 0).all()


@pytest.mark.parametrize("d,gamma", [(1, 0.3), (3, 0.01), (6, 0.5), (8, 0.9)])
def test_query_state_is_normalized(d: int, gamma: float) -> None:
    b = query_state(DistributedQuery(d, gamma))
    assert len(b) == 1 << d
    assert abs(np.sum(b**2) - 1) <= 1e-12


def test_query_state_centre() -> None:
    b = query_state(DistributedQuery(2, 0.1, center="10"))
    assert int(np.argmax(b)) == 0b10
    assert b[0b01] == pytest.approx(0.1)


@pytest.mark.parametrize("gamma", [0.0, 1.0, -0.2, 1.5])
def test_gamma_out_of_range(gamma: float) -> None:
    with pytest.raises(GammaOutOfRange):
        DistributedQuery(2, gamma)


def test_distributed_query_validation() -> None:
    with pytest.raises(LengthMismatch):
        DistributedQuery(0, 0.25)
    with pytest.raises(LengthMismatch):
        DistributedQuery(2, 0.25, center="101")
    with pytest.raises(LengthMismatch):
        DistributedQuery(2, 0.25, center="1x")
    assert DistributedQuery(3, 0.25).center == "000"


def test_flat_query_warns(caplog: pytest.LogCaptureFixture) -> None:
    DistributedQuery(2, 0.5)
    assert "flat" in caplog.text


def test_query_oracle_sharp_limit() -> None:
    oracle = build_query_oracle(DistributedQuery(1, 1e-12)).matrix
    np.testing.assert_allclose(oracle, np.diag([-1, 1]), atol=1e-5)
    # a finite width leaves off-diagonal terms of order sqrt(gamma)
    wide = build_query_oracle(DistributedQuery(1, 1e-6)).matrix
    np.testing.assert_allclose(np.diag(wide), [-1, 1], atol=1e-5)


def test_query_oracle_reflection_laws() -> None:
    rng = np.random.default_rng(17)
    for _ in range(100):
        d = int(rng.integers(1, 7))
        gamma = float(rng.uniform(0.01, 0.99))
        query = DistributedQuery(d, gamma)
        oracle = build_query_oracle(query).matrix
        b = query_state(query)
        dim = 1 << d
        assert np.max(np.abs(oracle @ oracle - np.eye(dim))) <= 1e-12
        assert np.max(np.abs(oracle @ b + b)) <= 1e-12
        assert np.max(np.abs(oracle - oracle.conj().T)) <= 1e-12
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v -= np.vdot(b, v) * b
        assert np.max(np.abs(oracle @ v - v)) <= 1e-12


def test_query_oracle_placement() -> None:
    oracle = build_query_oracle(DistributedQuery(2, 0.25), qubits=[3, 5])
    assert oracle.qubits == (3, 5)
    with pytest.raises(LengthMismatch):
        build_query_oracle(DistributedQuery(2, 0.25), qubits=[3])


def test_query_oracle_dimension_ceiling() -> None:
    with pytest.raises(DimensionTooLarge):
        build_query_oracle(DistributedQuery(13, 0.25))


def test_memory_oracle_single_memory() -> None:
    db = build_database("ACG", 3)
    n = db.num_qubits
    uniform = run(list(CircuitBuilder(n).h(*range(n)).build()), new_state(n))
    marked = run(build_memory_oracle(db, "ACG"), uniform)
    flipped = np.flatnonzero(np.sign(marked.amplitudes.real) < 0)
    # tag register is empty, the memory sits at data 0 after the evolution
    assert flipped.tolist() == [0]


def test_memory_oracle_flips_stored_locations(section_db: QuantumDatabase) -> None:
    n = section_db.num_qubits
    uniform = run(list(CircuitBuilder(n).h(*range(n)).build()), new_state(n))
    marked = run(build_memory_oracle(section_db, SECTION_QUERY), uniform)
    flipped = set(np.flatnonzero(marked.amplitudes.real < 0).tolist())
    query = 0b0100
    expected = {m.index | (int(m.bits, 2) ^ query) << 4 for m in section_db.memories}
    assert len(flipped) == 15
    assert flipped == expected
    assert not any((index & 0b1111) == 15 for index in flipped)


def test_memory_oracle_is_an_involution(section_db: QuantumDatabase) -> None:
    state = random_state(section_db.num_qubits, np.random.default_rng(21))
    oracle = build_memory_oracle(section_db, SECTION_QUERY)
    twice = run(oracle + oracle, state)
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) <= 1e-12


def test_memory_oracle_rejects_wrong_length(section_db: QuantumDatabase) -> None:
    with pytest.raises(LayoutInvalid):
        build_memory_oracle(section_db, "CAT")


def test_diffusion_cases() -> None:
    n = 3
    uniform = run(list(CircuitBuilder(n).h(0, 1, 2).build()), new_state(n))
    diffused = run(build_diffusion(n), uniform)
    overlap = np.vdot(uniform.amplitudes, diffused.amplitudes)
    assert abs(abs(overlap) - 1) <= 1e-12

    # inversion about the mean of |00>: [-0.5, 0.5, 0.5, 0.5] up to global phase
    out = run(build_diffusion(2), new_state(2)).amplitudes
    phase = out[1] / abs(out[1])
    np.testing.assert_allclose(out / phase, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    state = random_state(3, np.random.default_rng(4))
    twice = run(build_diffusion(3) * 2, state)
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) <= 1e-12


def test_diffusion_gate_recipe() -> None:
    n = 5
    counts = Circuit(n, tuple(build_diffusion(n))).gate_counts()
    assert counts["H"] == 2 * n
    assert counts["C0X"] == 2 * n
    assert counts["ControlledPhase"] == 1


def test_state_reflection(section_db: QuantumDatabase) -> None:
    prep = build_preparation(section_db, SECTION_QUERY)
    psi = execute(prep, new_state(section_db.num_qubits))
    reflection = build_state_reflection(prep)
    # -|psi> for the prepared state itself
    reflected = run(reflection, psi)
    np.testing.assert_allclose(reflected.amplitudes, -psi.amplitudes, atol=1e-12)

    v = random_state(section_db.num_qubits, np.random.default_rng(5)).amplitudes
    v = v - np.vdot(psi.amplitudes, v) * psi.amplitudes
    v /= np.linalg.norm(v)
    orthogonal = run(reflection, StateVector(section_db.num_qubits, v))
    np.testing.assert_allclose(orthogonal.amplitudes, v, atol=1e-12)


def test_state_reflection_of_hadamards_is_diffusion() -> None:
    n = 3
    hadamards = CircuitBuilder(n).h(*range(n)).build()
    state = random_state(n, np.random.default_rng(6))
    a = run(build_state_reflection(hadamards), state).amplitudes
    b = run(build_diffusion(n), state).amplitudes
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize(
    "space,solutions,expected", [(256, 1, 12), (4, 1, 1), (256, 128, 1), (16, 1, 3)]
)
def test_grover_iterations(space: int, solutions: int, expected: int) -> None:
    assert grover_iterations(space, solutions) == expected


def test_grover_iterations_errors() -> None:
    with pytest.raises(NoSolutions):
        grover_iterations(16, 0)
    with pytest.raises(SolutionsExceedSpace):
        grover_iterations(16, 16)
