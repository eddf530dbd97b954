"""Model families: term enumeration order, counts, sampling, assembly."""

import numpy as np
import pytest

from chaintomo.models import (
    MODEL_KINDS,
    assemble,
    enumerate_terms,
    min_length,
    param_count,
    sample_params,
    term_amplitudes,
)
from chaintomo.pauli import string_matrix

from reference_grids import H2_PARAM_COUNT, H3TABLE_PARAM_COUNT


def test_param_count_closed_forms():
    for L, n in H2_PARAM_COUNT.items():
        assert param_count("h2", L) == n
    for L, n in H3TABLE_PARAM_COUNT.items():
        assert param_count("h3table", L) == n
    assert param_count("h2prime", 3) == 36
    assert param_count("h2prime", 7) == 120
    assert param_count("h3", 3) == 54
    assert param_count("h3", 5) == 132


def test_param_count_matches_enumeration():
    for kind in MODEL_KINDS:
        for L in range(min_length(kind), 7):
            assert enumerate_terms(kind, L).n_params == param_count(kind, L)


def test_length_validation():
    with pytest.raises(ValueError):
        param_count("h2", 1)
    with pytest.raises(ValueError):
        enumerate_terms("h3", 2)
    with pytest.raises(ValueError):
        enumerate_terms("h2prime", 2)
    with pytest.raises(ValueError):
        param_count("nope", 4)


def test_h2_term_order():
    terms = [str(t) for t in enumerate_terms("h2", 2).terms]
    assert terms == [
        "XI", "YI", "ZI", "IX", "IY", "IZ",
        "XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ",
    ]


def test_h2prime_next_nearest_block():
    terms = [str(t) for t in enumerate_terms("h2prime", 3).terms]
    # 9 single-site terms, 18 nearest-neighbor pairs, then the skip-one pairs
    assert terms[27:33] == ["XIX", "XIY", "XIZ", "YIX", "YIY", "YIZ"]
    assert len(terms) == 36


def test_h3_three_body_block():
    terms = [str(t) for t in enumerate_terms("h3", 3).terms]
    assert terms[:3] == ["XII", "YII", "ZII"]
    assert terms[27] == "XXX"
    assert terms[-1] == "ZZZ"
    assert len(terms) == 54


def test_h3table_is_union_of_blocks():
    terms = [str(t) for t in enumerate_terms("h3table", 3).terms]
    assert len(terms) == 63
    assert len(set(terms)) == 63
    assert terms[27] == "XIX"  # skip-one pairs precede the triples
    assert terms[36] == "XXX"
    three_body = [t for t in terms if "I" not in t]
    assert len(three_body) == 27


def test_terms_fit_in_three_site_windows():
    for kind in MODEL_KINDS:
        for term in enumerate_terms(kind, 5).terms:
            support = [i for i, c in enumerate(str(term)) if c != "I"]
            assert support, "identity string is not a model term"
            assert support[-1] - support[0] <= 2


def test_sample_params():
    basis = enumerate_terms("h2", 3)
    a = sample_params(basis, 5)
    b = sample_params(basis, 5)
    c = sample_params(basis, 6)
    assert a.shape == (27,)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_assemble_matches_dense_sum():
    for kind, L in (("h2", 3), ("h3table", 3)):
        basis = enumerate_terms(kind, L)
        coeffs = sample_params(basis, 17)
        h = assemble(basis, coeffs)
        dense = sum(c * string_matrix(t) for c, t in zip(coeffs, basis.terms))
        assert np.max(np.abs(h - dense)) < 1e-12
        assert np.max(np.abs(h - h.conj().T)) == 0.0


def test_assemble_validates_length():
    basis = enumerate_terms("h2", 2)
    with pytest.raises(ValueError):
        assemble(basis, np.ones(14))


def test_term_amplitudes():
    basis = enumerate_terms("h2", 3)
    rng = np.random.default_rng(23)
    psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    amps = term_amplitudes(basis, psi)
    assert amps.shape == (8, basis.n_params)
    for n in (0, 7, 26):
        assert np.allclose(amps[:, n], string_matrix(basis.terms[n]) @ psi, atol=1e-14)
    with pytest.raises(ValueError):
        term_amplitudes(basis, np.ones(4))
