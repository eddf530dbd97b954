"""Joint eigenvalue-equation constraint matrix and recovery."""

import numpy as np
import pytest

from chaintomo import eee, hoe
from chaintomo.eee import DegenerateRecoveryError, compare_methods
from chaintomo.models import (
    TermBasis,
    assemble,
    enumerate_terms,
    sample_params,
    term_amplitudes,
)
from chaintomo.pauli import PauliString
from chaintomo.spectral import build_steady_state, eig_hermitian


def _instance(kind="h2", L=3, q=2, seed=0):
    basis = enumerate_terms(kind, L)
    coeffs = sample_params(basis, seed)
    h = assemble(basis, coeffs)
    state = build_steady_state(eig_hermitian(h), q, "lowest", seed + 1)
    return basis, coeffs, h, state


def test_single_qubit_by_hand():
    # H = a Z with a = 1; the spin-up state has energy +1, so the
    # stacked unknowns (a, E) solve [[1, -1], [0, 0], [0, 0], [0, 0]].
    basis = TermBasis(kind="h2", L=1, terms=(PauliString("Z"),))
    psi = np.array([1.0, 0.0])
    qmat = eee.constraint_matrix(basis, psi)
    assert np.array_equal(qmat, [[1.0, -1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    joint = eee.recover(qmat, n_params=1)
    assert joint.rank == 1
    assert joint.gap == 0
    assert joint.unique
    assert abs(joint.coefficients[0]) == pytest.approx(1.0)
    assert joint.coefficients[0] * joint.eigenvalues[0] == pytest.approx(1.0)


def test_block_layout_matches_amplitudes():
    basis, _, _, state = _instance(seed=1)
    qmat = eee.constraint_matrix(basis, state)
    dim, n, q = basis.dim, basis.n_params, state.q
    assert qmat.shape == (2 * dim * q, n + q)
    for mu in range(q):
        psi = state.states[:, mu]
        amps = term_amplitudes(basis, psi)
        block = qmat[2 * dim * mu : 2 * dim * (mu + 1)]
        assert np.array_equal(block[:dim, :n], amps.real)
        assert np.array_equal(block[dim:, :n], amps.imag)
        col = np.zeros((2 * dim, q))
        col[:dim, mu] = -psi.real
        col[dim:, mu] = -psi.imag
        assert np.array_equal(block[:, n:], col)


def test_true_unknowns_span_the_nullspace():
    basis, coeffs, _, state = _instance(seed=2)
    qmat = eee.constraint_matrix(basis, state)
    x_true = np.concatenate([coeffs, state.energies])
    bound = 1e-9 * max(1.0, np.max(np.abs(qmat))) * np.linalg.norm(x_true)
    assert np.max(np.abs(qmat @ x_true)) <= bound


def test_rank_of_tabulated_cell():
    basis, _, _, state = _instance(seed=3)
    joint = eee.recover(eee.constraint_matrix(basis, state), basis.n_params)
    assert joint.rank == 28
    assert joint.gap == 0
    assert joint.unique


def test_wide_matrix_reports_exact_zero_sigma_min():
    basis, _, _, state = _instance(L=2, q=1, seed=4)
    qmat = eee.constraint_matrix(basis, state)
    assert qmat.shape == (8, 16)
    joint = eee.recover(qmat, basis.n_params)
    assert joint.sigma_min == 0.0
    assert not joint.unique
    assert joint.gap == 16 - 8


def test_recovered_pair_solves_eigenvalue_equations():
    basis, coeffs, _, state = _instance(L=5, q=2, seed=5)
    joint = eee.recover(eee.constraint_matrix(basis, state), basis.n_params)
    assert joint.unique
    h_rec = assemble(basis, joint.coefficients)
    scale = np.linalg.norm(h_rec, 2)
    for mu in range(state.q):
        psi = state.states[:, mu]
        residual = h_rec @ psi - joint.eigenvalues[mu] * psi
        assert np.linalg.norm(residual) <= 1e-8 * scale
    # recovered eigenvalues are the true energies under the recovered scale
    sign = np.sign(np.dot(coeffs, joint.coefficients))
    want = sign * state.energies / np.linalg.norm(coeffs)
    assert joint.eigenvalues == pytest.approx(want, rel=1e-8, abs=1e-10)


def test_single_state_input_forms():
    basis, _, _, state = _instance(L=2, q=1, seed=6)
    psi = state.states[:, 0]
    from_1d = eee.constraint_matrix(basis, psi)
    from_2d = eee.constraint_matrix(basis, psi[:, None])
    from_state = eee.constraint_matrix(basis, state)
    assert np.array_equal(from_1d, from_2d)
    assert np.array_equal(from_1d, from_state)


def test_input_validation():
    basis = enumerate_terms("h2", 2)
    with pytest.raises(ValueError):
        eee.constraint_matrix(basis, np.empty((4, 0)))
    with pytest.raises(ValueError):
        eee.constraint_matrix(basis, np.zeros(8, dtype=complex))
    with pytest.raises(ValueError):
        eee.recover(np.zeros((3, 4)), 2)
    with pytest.raises(ValueError):
        eee.recover(np.ones(4), 2)
    with pytest.raises(ValueError):
        eee.recover(np.eye(4), 0)
    with pytest.raises(ValueError):
        eee.recover(np.eye(4), 4)


def test_vanishing_coefficient_block_is_rejected():
    qmat = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(DegenerateRecoveryError):
        eee.recover(qmat, n_params=2)


def test_compare_methods_on_unique_cell():
    basis, _, _, state = _instance(L=5, q=1, seed=7)
    report = hoe.recover(hoe.constraint_matrix(basis, state))
    joint = eee.recover(eee.constraint_matrix(basis, state), basis.n_params)
    cmp = compare_methods(report, joint, state.q)
    assert cmp.rank_relation_ok
    assert cmp.gap_relation_ok
    assert cmp.aligned_distance is not None and cmp.aligned_distance <= 1e-8
    assert cmp.angle is not None and cmp.angle <= 1e-7


def test_compare_methods_on_ambiguous_cell():
    basis, _, _, state = _instance(L=2, q=1, seed=8)
    report = hoe.recover(hoe.constraint_matrix(basis, state))
    joint = eee.recover(eee.constraint_matrix(basis, state), basis.n_params)
    cmp = compare_methods(report, joint, state.q)
    assert cmp.rank_relation_ok
    assert cmp.gap_relation_ok
    assert cmp.angle is None
    assert cmp.aligned_distance is None
