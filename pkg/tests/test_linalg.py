import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qsymx import linalg
from qsymx.errors import FormError, RankAmbiguityError


def _spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def test_kernel_basic():
    a = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    ker = linalg.kernel(a)
    assert ker.shape == (3, 1)
    assert np.allclose(a @ ker, 0)
    assert ker[0, 0] > 0


def test_kernel_of_zero_is_everything():
    assert np.array_equal(linalg.kernel(np.zeros((2, 3))), np.eye(3))


def test_scale_catches_roundoff_matrices():
    noise = np.array([[1e-16]])
    assert linalg.kernel(noise).shape[1] == 0
    assert linalg.kernel(noise, scale=2.0).shape[1] == 1


def test_rank_ambiguity():
    a = np.diag([1.0, 1e-7, 0.0])
    assert linalg.rank(a) == 2
    with pytest.raises(RankAmbiguityError):
        linalg.rank(a, gap=linalg.AMBIGUITY_GAP)
    with pytest.raises(RankAmbiguityError):
        linalg.kernel(a, gap=linalg.AMBIGUITY_GAP)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 6))
def test_inv_sqrt_matches_fractional_power(seed, n):
    rng = np.random.default_rng(seed)
    g = _spd(rng, n)
    s = _spd(rng, n)
    a = np.linalg.solve(g, s)  # self-adjoint for g, positive spectrum
    t = linalg.inv_sqrt_psd(a, g)
    assert np.allclose(t @ t @ a, np.eye(n), atol=1e-9)
    ref = scipy.linalg.fractional_matrix_power(a, -0.5).real
    assert np.allclose(t, ref, atol=1e-8)
    # the root is again self-adjoint for g
    assert np.allclose(g @ t, t.T @ g, atol=1e-9)


def test_inv_sqrt_rejects_non_selfadjoint():
    with pytest.raises(FormError):
        linalg.inv_sqrt_psd(np.array([[1.0, 1.0], [0.0, 1.0]]), np.eye(2))
    with pytest.raises(FormError):
        linalg.inv_sqrt_psd(np.diag([1.0, -1.0]), np.eye(2))


def test_check_form():
    with pytest.raises(FormError):
        linalg.check_form(np.diag([1.0, 0.0]))
    with pytest.raises(FormError):
        linalg.check_form(np.array([[1.0, 0.5], [0.0, 1.0]]))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 6))
def test_form_orthonormalize_and_projector(seed, n):
    rng = np.random.default_rng(seed)
    g = _spd(rng, n)
    b = rng.standard_normal((n, n - 1))
    q = linalg.form_orthonormalize(b, g)
    assert np.allclose(q.T @ g @ q, np.eye(n - 1), atol=1e-9)
    p = linalg.form_projector(b, g)
    assert np.allclose(p @ p, p, atol=1e-9)
    assert np.allclose(g @ p, p.T @ g, atol=1e-9)
    assert np.allclose(p @ b, b, atol=1e-9)
    assert linalg.principal_angles(b, q).max() < 1e-7


def test_extend_orthonormal_drops_dependent_columns():
    base = np.eye(4)[:, :1]
    cands = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    new = linalg.extend_orthonormal(base, cands)
    assert new.shape == (4, 1)
    assert np.allclose(new.T @ base, 0)


@given(arrays(np.float64, (3, 4), elements=st.floats(-5, 5)))
def test_kernel_and_range_are_complementary(a):
    assert linalg.kernel(a).shape[1] + linalg.range_basis(a).shape[1] == 4


def test_adjoint_definition():
    rng = np.random.default_rng(3)
    g = _spd(rng, 3)
    a = rng.standard_normal((3, 3))
    adj = linalg.adjoint(a, g)
    v, w = rng.standard_normal(3), rng.standard_normal(3)
    assert np.isclose((a @ v) @ g @ w, v @ g @ (adj @ w))
