import itertools

import numpy as np
import pytest

from conftest import fundamentals, module
from qsymx import braiding, uqg
from qsymx.cartan import weight_inner
from qsymx.errors import ConventionError, PathDisagreementError


def _pairs():
    out = []
    for ctype in ("A1", "A2", "B2"):
        out.extend((ctype, v, w) for v, w in itertools.product(range(len(fundamentals(ctype))), repeat=2))
    return out


@pytest.fixture(scope="module")
def a1_fund():
    return fundamentals("A1")[0]


def test_d_operator(a1_fund):
    q = a1_fund.q
    d = np.diag(braiding.d_operator(a1_fund, a1_fund))
    assert d[0] == pytest.approx(q ** 0.5)
    assert d[1] == pytest.approx(q ** -0.5)
    one = fundamentals("A1", 1.0)[0]
    assert np.array_equal(braiding.d_operator(one, one), np.eye(4))


@pytest.mark.parametrize("ctype,i,j", _pairs())
def test_r_matrix_contract(ctype, i, j):
    fs = fundamentals(ctype)
    v, w = fs[i], fs[j]
    r, order, res = braiding.r_matrix_info(v, w)
    assert order == "forward"
    assert res < 1e-8
    lam, mu = v.blocks[0][0], w.blocks[0][0]
    expected = v.q ** float(weight_inner(v.rs, lam, mu))
    e0 = np.zeros(r.shape[0])
    e0[0] = expected
    assert np.abs(r[:, 0] - e0).max() < 1e-10


def test_r_matrix_on_simples():
    v = module("A1", [(3,)])
    w = module("A1", [(2,)])
    assert braiding.r_matrix_info(v, w)[2] < 1e-8
    x = module("A2", [(1, 1)])
    y = fundamentals("A2")[1]
    assert braiding.r_matrix_info(x, y)[2] < 1e-8


def test_r_matrix_at_and_near_one():
    v = fundamentals("A1", 1.0)[0]
    assert np.array_equal(braiding.r_matrix(v, v), np.eye(4))
    w = fundamentals("A1", 1.001)[0]
    assert np.linalg.norm(braiding.r_matrix(w, w) - np.eye(4)) < 0.05
    sigma = braiding.coboundary(w, w)
    assert np.linalg.norm(sigma - braiding.flip(w, w)) < 0.05


def test_a1_casimir_eigenvalues(a1_fund):
    q = a1_fund.q
    r = braiding.r_matrix(a1_fund, a1_fund)
    tau = braiding.flip(a1_fund, a1_fund)
    ev = np.sort(np.linalg.eigvals(tau @ r @ tau @ r).real)
    assert np.allclose(ev, sorted([q ** -3, q, q, q]))
    br = np.sort(np.linalg.eigvals(tau @ r).real)
    assert np.allclose(br, sorted([-q ** -1.5, q ** 0.5, q ** 0.5, q ** 0.5]))
    sigma = braiding.coboundary(a1_fund, a1_fund)
    assert np.allclose(np.sort(np.linalg.eigvals(sigma).real), [-1, 1, 1, 1])


def test_isotypic():
    v = fundamentals("A1")[0]
    iso = braiding.isotypic(uqg.tensor(v, v))
    assert iso.multiplicities() == {(2,): 1, (0,): 1}
    x, y = fundamentals("A2")
    t = uqg.tensor(x, y)
    iso = braiding.isotypic(t)
    assert iso.multiplicities() == {(1, 1): 1, (0, 0): 1}
    total = sum(p for _, p, _ in iso.components)
    assert np.allclose(total, np.eye(t.dim), atol=1e-9)
    for _, p, _ in iso.components:
        assert np.allclose(p @ p, p, atol=1e-9)
        assert np.allclose(t.gram @ p, p.T @ t.gram, atol=1e-9)
    p0, p1 = iso.components[0][1], iso.components[1][1]
    assert np.abs(p0 @ p1).max() < 1e-9


def test_isotypic_with_trivial():
    rs = fundamentals("A2")[0].rs
    v = fundamentals("A2")[0]
    triv = uqg.build_simple(rs, (0, 0), 1.2)
    iso = braiding.isotypic(uqg.tensor(v, triv))
    assert len(iso.components) == 1
    assert np.allclose(iso.components[0][1], np.eye(3))


def _sigma_checks(v, w):
    sigma, diff = braiding.coboundary_paths(v, w)
    vw, wv = uqg.tensor(v, w), uqg.tensor(w, v)
    back = braiding.coboundary(w, v)
    assert diff < 1e-9
    assert np.linalg.norm(sigma.T @ wv.gram @ sigma - vw.gram) < 1e-9
    assert np.linalg.norm(np.linalg.solve(vw.gram, sigma.T @ wv.gram) - back) < 1e-9
    assert np.linalg.norm(back @ sigma - np.eye(vw.dim)) < 1e-8
    assert braiding.module_map_residual(sigma, vw, wv) < 1e-8


@pytest.mark.parametrize("ctype,i,j", _pairs())
def test_coboundary_properties(ctype, i, j):
    fs = fundamentals(ctype)
    _sigma_checks(fs[i], fs[j])


@pytest.mark.parametrize("summands", [[(1,), (2,)], [(3,)]])
def test_coboundary_on_sums_and_simples(summands):
    v = module("A1", summands)
    _sigma_checks(v, v)
    sigma = braiding.coboundary(v, v)
    # sigma_{V,V} is a self-adjoint involution
    assert np.linalg.norm(sigma @ sigma - np.eye(v.dim ** 2)) < 1e-8


def test_sigma_is_flip_at_one():
    for ctype in ("A1", "A2"):
        v = fundamentals(ctype, 1.0)[0]
        assert np.array_equal(braiding.coboundary(v, v), braiding.flip(v, v))


def test_convention_error(monkeypatch):
    v = fundamentals("A1", 1.25)[0]
    monkeypatch.setattr(braiding, "_assemble", lambda V, W, rev: np.eye(V.dim * W.dim) + 1.0)
    braiding.r_matrix_info.cache_clear()
    with pytest.raises(ConventionError):
        braiding.r_matrix_info(v, v)
    braiding.r_matrix_info.cache_clear()


def test_path_disagreement(monkeypatch):
    v = fundamentals("A1", 1.35)[0]
    braiding.coboundary.cache_clear()
    real = braiding._inv_sqrt_spectral
    monkeypatch.setattr(braiding, "_inv_sqrt_spectral", lambda V, W: 1.01 * real(V, W))
    with pytest.raises(PathDisagreementError):
        braiding.coboundary_paths(v, v)
    braiding.coboundary.cache_clear()
