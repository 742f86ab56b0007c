import numpy as np
import pytest

from app.errors import OracleError
from app.krylov import FullGramSchmidt, orthogonal_vector, run_krylov
from app.lattice import DiamondVector, PotentialField, apply_hamiltonian
from app.oracle import (
    ORACLE_MAX_N,
    build_dense_operator,
    engine_discrepancy,
    oracle_distance_series,
    oracle_orthogonal_vector,
)


def test_dense_operator_is_symmetric(disordered_field):
    operator = build_dense_operator(disordered_field, 4)
    assert operator.matrix.shape == (81, 81)
    assert operator.asymmetry() == 0.0


def test_dense_operator_matches_stencil(disordered_field):
    operator = build_dense_operator(disordered_field, 6)
    psi = DiamondVector.delta(1, -2, radius=3)
    dense = operator.to_diamond(operator.matrix @ operator.basis_vector(1, -2), 4)
    stencil = apply_hamiltonian(psi, disordered_field)
    assert np.allclose(dense.values, stencil.values, atol=1e-15)


def test_dense_operator_honors_diagonal(clean_field):
    operator = build_dense_operator(clean_field, 2, diagonal=0.0)
    assert np.all(np.diag(operator.matrix) == 0.0)
    assert operator.matrix[operator.index(0, 0), operator.index(0, 1)] == -1.0
    assert operator.matrix[operator.index(0, 0), operator.index(1, 1)] == 0.0


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("c", [0.0, 0.5, 2.0])
def test_engine_agrees_with_oracle(c, seed):
    field = PotentialField(c=c, seed=seed)
    engine = run_krylov(field, 25, FullGramSchmidt()).distances
    reference = np.array(oracle_distance_series(field, 25, box_radius=26))
    assert reference.shape == engine.shape
    assert np.max(np.abs(engine - reference)) < 1e-9


def test_oracle_small_case_is_exact(clean_field):
    assert oracle_distance_series(clean_field, 2)[:2] == pytest.approx([1.0, 1.0], abs=1e-15)
    assert engine_discrepancy(clean_field, 2) <= 1e-12


def test_orthogonal_vectors_agree_entrywise(disordered_field):
    engine = orthogonal_vector(disordered_field, 6)
    reference = oracle_orthogonal_vector(disordered_field, 6)
    scale = np.sqrt(engine.squared_norm)
    assert np.max(np.abs(engine.values - reference.values)) < 1e-10 * scale


def test_box_must_exceed_depth(clean_field):
    with pytest.raises(OracleError):
        oracle_distance_series(clean_field, 10, box_radius=10)
    with pytest.raises(OracleError):
        build_dense_operator(clean_field, 0)


def test_oracle_depth_is_capped(clean_field):
    with pytest.raises(OracleError):
        engine_discrepancy(clean_field, ORACLE_MAX_N + 1)
