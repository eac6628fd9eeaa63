from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymx.cartan import (
    build_root_system,
    casimir_exponent,
    is_dominant,
    reflect,
    roots_from_word,
    weight_inner,
    weight_multiplicities,
    weyl_dim,
)
from qsymx.errors import UnsupportedTypeError, WeightError


@pytest.mark.parametrize("ctype,lam,dim", [
    ("A1", (1,), 2), ("A1", (3,), 4), ("A1", (0,), 1),
    ("A2", (1, 0), 3), ("A2", (0, 1), 3), ("A2", (1, 1), 8), ("A2", (2, 1), 15), ("A2", (0, 2), 6),
    ("B2", (1, 0), 5), ("B2", (0, 1), 4), ("B2", (1, 1), 16), ("B2", (0, 2), 10),
])
def test_weyl_dim(ctype, lam, dim):
    assert weyl_dim(build_root_system(ctype), lam) == dim


def test_b2_conventions(b2):
    assert b2.symmetrizers == (2, 1)
    assert b2.fw_gram == ((2, 1), (1, 1))
    # long simple root has squared length 4, short one 2
    assert weight_inner(b2, b2.simple_root(0), b2.simple_root(0)) == 4
    assert weight_inner(b2, b2.simple_root(1), b2.simple_root(1)) == 2


def test_a1_pairing(a1):
    assert weight_inner(a1, (1,), (1,)) == Fraction(1, 2)
    assert casimir_exponent(a1, (2,)) == 4
    assert casimir_exponent(a1, (1,)) == Fraction(3, 2)


@pytest.mark.parametrize("ctype", ["A1", "A2", "B2"])
def test_roots_from_word_are_the_positive_roots(ctype):
    rs = build_root_system(ctype)
    assert sorted(roots_from_word(rs)) == sorted(rs.positive_root_weights)
    # the reduced word for w0 sends rho to -rho
    w = rs.rho
    for i in rs.w0_word:
        w = reflect(rs, i, w)
    assert w == tuple(-x for x in rs.rho)


def test_a2_adjoint_multiplicity(a2):
    mult = weight_multiplicities(a2, (1, 1))
    assert mult[(0, 0)] == 2
    assert sum(mult.values()) == 8


def test_errors(a2):
    with pytest.raises(UnsupportedTypeError):
        build_root_system("G2")
    with pytest.raises(WeightError):
        a2.check((1,))
    with pytest.raises(WeightError):
        weyl_dim(a2, (1, -1))


small = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=30, deadline=None)
@given(ctype=st.sampled_from(["A1", "A2", "B2"]), lam=small)
def test_freudenthal_total_is_weyl_dim(ctype, lam):
    rs = build_root_system(ctype)
    lam = lam[: rs.rank]
    mult = weight_multiplicities(rs, lam)
    assert sum(mult.values()) == weyl_dim(rs, lam)
    assert mult[lam] == 1


@settings(max_examples=30, deadline=None)
@given(ctype=st.sampled_from(["A2", "B2"]), lam=small, i=st.integers(0, 1))
def test_multiplicities_are_weyl_invariant(ctype, lam, i):
    rs = build_root_system(ctype)
    mult = weight_multiplicities(rs, lam)
    for mu, m in mult.items():
        assert mult[reflect(rs, i, mu)] == m


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_dominance(w):
    assert is_dominant(w) == all(x >= 0 for x in w)
