from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fundamentals, module
from qsymx import uqg
from qsymx.cartan import build_root_system, reflect, roots_from_word, weight_multiplicities, weyl_dim
from qsymx.errors import WeightError


def test_quantum_integer_values():
    assert uqg.quantum_integer(1, 1.7) == pytest.approx(1.0)
    assert uqg.quantum_integer(2, 1.7) == pytest.approx(1.7 + 1 / 1.7)
    # exact rational oracle: [3]_{6/5} = (6/5)^2 + 1 + (5/6)^2 = 2821/900
    assert uqg.quantum_integer(3, 1.2) == pytest.approx(float(Fraction(2821, 900)), rel=1e-14)
    assert uqg.quantum_integer(5, 1.0) == 5.0
    assert uqg.quantum_factorial(3, 1.0) == 6.0


@given(m=st.integers(-6, 6), n=st.integers(-6, 6), q=st.floats(0.5, 2.0))
def test_quantum_integer_addition_rule(m, n, q):
    lhs = uqg.quantum_integer(m + n, q)
    rhs = q ** (-n) * uqg.quantum_integer(m, q) + q ** m * uqg.quantum_integer(n, q)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(n=st.integers(0, 8), q=st.floats(0.9999, 1.0001))
def test_quantum_integer_continuous_at_one(n, q):
    assert uqg.quantum_integer(n, q) == pytest.approx(n, abs=1e-2)


@pytest.mark.parametrize("ctype", ["A1", "A2", "B2"])
@pytest.mark.parametrize("q", [1.0, 1.2, 1.3])
def test_fundamentals(ctype, q):
    rs = build_root_system(ctype)
    for i, m in enumerate(fundamentals(ctype, q)):
        assert m.dim == weyl_dim(rs, rs.fundamental(i))
        res = uqg.relation_residuals(m)
        assert max(res.values()) < 1e-9
        assert uqg.gram_residual(m) < 1e-8
        assert m.gram[0, 0] == pytest.approx(1.0)


def test_a1_fundamental_form(a1):
    q = 1.2
    m = uqg.build_fundamental(a1, 0, q)
    assert m.basis_weights == [(1,), (-1,)]
    # (F v, F v) = (v, E K^-1 F v) = q (v, v)
    assert np.allclose(m.gram, np.diag([1.0, q]))


@pytest.mark.parametrize("ctype,lam", [
    ("A1", (3,)), ("A1", (4,)), ("A2", (1, 1)), ("A2", (2, 1)), ("A2", (0, 2)),
    ("B2", (1, 1)), ("B2", (0, 2)), ("B2", (2, 0)),
])
def test_build_simple(ctype, lam):
    rs = build_root_system(ctype)
    m = uqg.build_simple(rs, lam, 1.2)
    assert m.dim == weyl_dim(rs, lam)
    # weight multiset against Freudenthal, an independent route
    assert Counter(m.basis_weights) == weight_multiplicities(rs, lam)
    assert max(uqg.relation_residuals(m).values()) < 1e-8
    assert uqg.gram_residual(m) < 1e-8
    np.linalg.cholesky(m.gram)
    hw = uqg.highest_weight_vectors(m, lam)
    assert hw.shape[1] == 1


def test_trivial_module(a2):
    m = uqg.build_simple(a2, (0, 0), 1.2)
    assert m.dim == 1
    assert not np.any(m.E[0]) and not np.any(m.F[1])


def test_non_dominant_rejected(a2):
    with pytest.raises(WeightError):
        uqg.build_simple(a2, (1, -1), 1.2)
    with pytest.raises(ValueError):
        uqg.build_simple(a2, (1, 0), -1.0)


@pytest.mark.parametrize("ctype,lam", [("A1", (3,)), ("A2", (1, 1)), ("B2", (1, 1))])
def test_weights_do_not_depend_on_q(ctype, lam):
    rs = build_root_system(ctype)
    a = uqg.build_simple(rs, lam, 1.2)
    b = uqg.build_simple(rs, lam, 1.3)
    assert a.dim == b.dim
    assert a.basis_weights == b.basis_weights


@pytest.mark.parametrize("ctype,lam", [("A1", (3,)), ("A2", (1, 1)), ("B2", (0, 2))])
def test_continuity_at_one(ctype, lam):
    rs = build_root_system(ctype)
    a = uqg.build_simple(rs, lam, 1.0)
    b = uqg.build_simple(rs, lam, 1.0 + 1e-6)
    for x, y in zip(a.E + a.F, b.E + b.F):
        assert np.abs(x - y).max() < 1e-4


@pytest.mark.parametrize("ctype,lam", [("A2", (1, 1)), ("B2", (1, 1)), ("A1", (3,))])
def test_gram_matches_restricted_product_form(ctype, lam):
    # the solved form equals the product form restricted to the closure
    rs = build_root_system(ctype)
    q = 1.3
    m = uqg.build_simple(rs, lam, q)
    fund = [uqg.build_fundamental(rs, i, q) for i, k in enumerate(lam) for _ in range(k)]
    big = uqg.tensor(*fund)
    start = np.zeros((big.dim, 1))
    start[0, 0] = 1.0
    basis, _ = uqg.lowering_closure(big, start, lam)
    restricted = basis.T @ big.gram @ basis
    assert np.allclose(restricted / restricted[0, 0], m.gram, atol=1e-9)


def test_tensor_product(a2):
    v, w = fundamentals("A2")
    t = uqg.tensor(v, w)
    assert t.dim == 9
    assert max(uqg.relation_residuals(t).values()) < 1e-9
    assert uqg.gram_residual(t) < 1e-8
    assert t.basis_weights[1] == tuple(np.add(v.basis_weights[0], w.basis_weights[1]))
    # coassociativity: both bracketings give the same matrices
    left = uqg.tensor(uqg.tensor(v, w), v)
    right = uqg.tensor(v, uqg.tensor(w, v))
    for x, y in zip(left.E + left.F, right.E + right.F):
        assert np.allclose(x, y)


def test_direct_sum_blocks(a1):
    m = module("A1", [(1,), (2,)])
    assert m.dim == 5
    assert m.summands == ((1,), (2,))
    assert m.blocks == (((1,), 0, 2), ((2,), 2, 5))
    assert uqg.gram_residual(m) < 1e-8


def test_bad_generators_are_detected(a1):
    m = uqg.build_fundamental(a1, 0, 1.2)
    broken = uqg.ModuleRep(m.rs, m.q, m.weights, (2 * m.E[0],), m.F)
    assert uqg.relation_residuals(broken)["EF"] > 1


def _braid_word(m, word):
    out = np.eye(m.dim)
    for i in word:
        out = out @ uqg.braid_operator(m, i)
    return out


@pytest.mark.parametrize("ctype", ["A2", "B2"])
@pytest.mark.parametrize("q", [1.0, 1.2, 1.3])
def test_braid_relations(ctype, q):
    rs = build_root_system(ctype)
    mods = fundamentals(ctype, q) + [uqg.build_simple(rs, (1, 1), q)]
    k = rs.braid_order(0, 1)
    for m in mods:
        lhs = _braid_word(m, [(0, 1)[j % 2] for j in range(k)])
        rhs = _braid_word(m, [(1, 0)[j % 2] for j in range(k)])
        assert np.linalg.norm(lhs - rhs) < 1e-8


@pytest.mark.parametrize("ctype", ["A1", "A2", "B2"])
def test_braid_operator_weights(ctype):
    rs = build_root_system(ctype)
    for m in fundamentals(ctype):
        for i in range(rs.rank):
            t = uqg.braid_operator(m, i)
            assert abs(np.linalg.det(t)) > 1e-8
            for col, mu in enumerate(m.basis_weights):
                rows = np.flatnonzero(np.abs(t[:, col]) > 1e-12)
                assert rows.size
                assert all(m.basis_weights[r] == reflect(rs, i, mu) for r in rows)


@pytest.mark.parametrize("ctype", ["A1", "A2", "B2"])
def test_root_vectors(ctype):
    rs = build_root_system(ctype)
    betas = roots_from_word(rs)
    for m in fundamentals(ctype) + [module(ctype, [tuple([1] * rs.rank)])]:
        es, fs = uqg.root_vector_operators(m)
        assert np.array_equal(es[0], m.E[rs.w0_word[0]])
        for beta, e, f in zip(betas, es, fs):
            assert uqg.nilpotency_index(e) <= m.dim
            assert uqg.nilpotency_index(f) <= m.dim
            for col, mu in enumerate(m.basis_weights):
                for r in np.flatnonzero(np.abs(e[:, col]) > 1e-10):
                    assert m.basis_weights[r] == tuple(np.add(mu, beta))
                for r in np.flatnonzero(np.abs(f[:, col]) > 1e-10):
                    assert m.basis_weights[r] == tuple(np.subtract(mu, beta))


def test_a2_nonsimple_root_vector_is_nonzero(a2):
    v = uqg.build_fundamental(a2, 0, 1.2)
    es, _ = uqg.root_vector_operators(v)
    # beta_2 = alpha_1 + alpha_2 = (1, 1) in fundamental coordinates
    assert np.any(np.abs(es[1]) > 1e-12)
