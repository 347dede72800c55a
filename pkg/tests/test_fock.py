from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdirac import fock as F
from ncdirac.linalg import random_orthogonal
from ncdirac.wick import wick_trace

from conftest import Q_GRID


@pytest.mark.parametrize(
    "q,n,cap,dims",
    [(-1, 2, 2, (1, 2, 1)), (0, 2, 2, (1, 2, 4)), (1, 1, 3, (1, 1, 1, 1))],
)
def test_level_dimensions(q, n, cap, dims):
    space = F.build_fock(q, n, cap)
    assert space.level_dims == dims
    assert space.total_dim == sum(dims)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exterior_algebra_dimension(n):
    space = F.build_fock(-1, n, n + 1)
    assert space.level_dims[: n + 1] == tuple(comb(n, k) for k in range(n + 1))
    assert space.total_dim == 2**n


@pytest.mark.parametrize("q", [-0.5, 0.0, 0.5])
def test_no_discarded_directions_inside_open_interval(q):
    space = F.build_fock(q, 2, 3)
    assert space.level_dims == (1, 2, 4, 8)


def test_budget_and_domain_errors():
    with pytest.raises(F.FockBudgetError):
        F.build_fock(0.0, 4, 8)
    with pytest.raises(ValueError):
        F.build_fock(1.5, 2, 2)
    with pytest.raises(ValueError):
        F.creation(F.build_fock(0.0, 2, 2), np.ones(3))


def test_creation_examples():
    space = F.build_fock(0.3, 2, 3)
    e = np.array([1.0, 0.0])
    v = F.creation(space, e) @ space.vacuum()
    np.testing.assert_allclose(v, space.level_vector(1, e), atol=1e-12)
    np.testing.assert_allclose(F.creation(space, np.zeros(2)), 0)
    fermi = F.build_fock(-1, 2, 2)
    one = fermi.level_vector(1, e)
    np.testing.assert_allclose(F.creation(fermi, e) @ one, 0, atol=1e-12)


def test_annihilation_examples():
    space = F.build_fock(0.5, 2, 3)
    e, f = np.array([1.0, 0.0]), np.array([0.3, -0.7])
    np.testing.assert_allclose(F.annihilation(space, e) @ space.vacuum(), 0, atol=1e-14)
    out = F.annihilation(space, e) @ space.level_vector(1, f)
    np.testing.assert_allclose(out, float(e @ f) * space.vacuum(), atol=1e-12)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_relation_below_cap(q, n):
    assert F.q_relation_residual(F.build_fock(q, n, 4)) < 1e-9


@given(st.sampled_from(Q_GRID), st.integers(0, 2**31 - 1))
def test_q_relation_random_vectors(q, seed):
    vecs = list(np.random.default_rng(seed).standard_normal((2, 2)))
    assert F.q_relation_residual(F.build_fock(q, 2, 3), vecs) < 1e-9


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_fermion_square(n, seed):
    e = np.random.default_rng(seed).standard_normal(n)
    e /= np.linalg.norm(e)
    assert F.fermion_square_residual(F.build_fock(-1, n, n), e) < 1e-12


@given(st.sampled_from(Q_GRID), st.integers(0, 2**31 - 1))
def test_gaussian_is_hermitian(q, seed):
    space = F.build_fock(q, 2, 3)
    s = F.s_q(space, np.random.default_rng(seed).standard_normal(2))
    assert np.abs(s - s.conj().T).max() < 1e-12


@pytest.mark.parametrize("q", Q_GRID)
def test_vacuum_trace_examples(q):
    space = F.build_fock(q, 2, 4)
    e, f = np.array([1.0, 0.0]), np.array([0.6, 0.8])
    assert F.vacuum_trace(space.identity()) == 1
    assert F.vacuum_trace(F.s_q(space, e)) == 0
    assert F.vacuum_trace(F.s_q(space, e) @ F.s_q(space, f)).real == pytest.approx(float(e @ f))
    s = F.s_q(space, e)
    assert F.vacuum_trace(np.linalg.matrix_power(s, 4)).real == pytest.approx(2 + q)


@given(st.sampled_from(Q_GRID), st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_truncation_exact_up_to_twice_cap(q, cap, seed):
    rng = np.random.default_rng(seed)
    space = F.build_fock(q, 2, cap)
    vecs = list(rng.standard_normal((2 * cap, 2)))
    assert F.word_vacuum_trace(space, vecs).real == pytest.approx(wick_trace(q, vecs), abs=1e-9)


def test_second_quantization_examples(rng):
    space = F.build_fock(0.4, 3, 3)
    np.testing.assert_allclose(F.second_quantize(space, np.eye(3)), np.eye(space.total_dim), atol=1e-12)
    u = random_orthogonal(3, rng)
    h = rng.standard_normal(3)
    np.testing.assert_allclose(F.automorphism(space, u, F.s_q(space, h)), F.s_q(space, u @ h), atol=1e-10)
    with pytest.raises(ValueError):
        F.second_quantize(space, 2 * np.eye(3))


@given(st.sampled_from(Q_GRID), st.integers(0, 2**31 - 1))
def test_second_quantization_preserves_trace(q, seed):
    rng = np.random.default_rng(seed)
    space = F.build_fock(q, 2, 3)
    u = random_orthogonal(2, rng)
    word = np.eye(space.total_dim, dtype=complex)
    for h in rng.standard_normal((4, 2)):
        word = word @ F.s_q(space, h)
    fu = F.second_quantize(space, u)
    np.testing.assert_allclose(fu.conj().T @ fu, np.eye(space.total_dim), atol=1e-10)
    assert F.vacuum_trace(F.automorphism(space, u, word)) == pytest.approx(F.vacuum_trace(word), abs=1e-10)
