import pytest
from hypothesis import given, strategies as st

from hkf.laurent import (
    ladd,
    lderiv,
    ldivmod_exact,
    leval_int,
    lformat,
    lfrom_pairs,
    linvert_var,
    lmono,
    lmul,
    lone,
    lpairs,
    lpow,
    lscale,
    lsub,
    lzero,
)

polys = st.dictionaries(
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=-9, max_value=9).filter(bool),
    max_size=6,
)


def test_basic_identities():
    p = {1: 1, -1: 1, 0: -1}
    assert ladd(p, lzero()) == p
    assert lmul(p, lone()) == p
    assert lsub(p, p) == {}
    assert lscale(p, 0) == {}


def test_mul_known():
    # (t - 1)(t + 1) = t^2 - 1
    assert lmul({1: 1, 0: -1}, {1: 1, 0: 1}) == {2: 1, 0: -1}


def test_pow():
    assert lpow({1: 1, 0: 1}, 3) == {3: 1, 2: 3, 1: 3, 0: 1}
    with pytest.raises(ValueError):
        lpow({1: 1, 0: 1}, -1)


def test_eval_and_deriv():
    # trefoil Alexander polynomial
    tre = {1: 1, 0: -1, -1: 1}
    assert leval_int(tre, 1) == 1
    assert abs(leval_int(tre, -1)) == 3  # knot determinant
    d2 = lderiv(lderiv(tre))
    assert leval_int(d2, 1) == 2  # so a2 = 1


def test_invert_var():
    p = {2: 3, -1: -4}
    assert linvert_var(p) == {-2: 3, 1: -4}
    assert linvert_var(linvert_var(p)) == p


def test_exact_division_known():
    num = lmul({1: 2, 0: -3, -2: 5}, {4: -1, 0: 7})
    assert ldivmod_exact(num, {4: -1, 0: 7}) == {1: 2, 0: -3, -2: 5}
    with pytest.raises(ValueError):
        ldivmod_exact({1: 1, 0: 1}, {1: 2})


def test_format():
    assert lformat({}) == "0"
    assert lformat({-1: 1, 0: -1, 1: 1}) == "t^-1 - 1 + t"
    assert lformat({0: -3, 2: 2}, var="z") == "-3 + 2*z^2"


def test_pairs_roundtrip():
    p = {3: -2, 0: 1, -5: 7}
    assert lfrom_pairs(lpairs(p)) == p
    assert lpairs(p) == ((-5, 7), (0, 1), (3, -2))


@given(polys, polys)
def test_mul_commutes(p, q):
    assert lmul(p, q) == lmul(q, p)


@given(polys, polys, polys)
def test_distributive(p, q, r):
    assert lmul(p, ladd(q, r)) == ladd(lmul(p, q), lmul(p, r))


@given(polys, polys)
def test_division_inverts_multiplication(p, q):
    prod = lmul(p, q)
    if p:
        assert ldivmod_exact(prod, p) == {e: c for e, c in q.items() if c}


@given(polys, st.sampled_from([1, -1]))
def test_eval_homomorphism(p, t):
    # at t = +/-1 every Laurent monomial takes an integer value
    q = {1: 1, 0: -2}
    lhs = leval_int(lmul(p, q), t)
    rhs = leval_int(p, t) * leval_int(q, t)
    assert lhs == rhs
