import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prymcheck.lattice import identity, imatmul, imatpow
from prymcheck.symplectic import (
    HomologyVector, SymplecticSpace, TwistWord, UsageError, base_representation,
    block_form, classify_matrix, eval_word, from_block, in_lambda_p, is_in_sp, lambda_p_generators,
    pair, phi_p, random_element, reduce_mod2, symplectic_inverse, to_block, transvection, z_matrix,
)


def mul2(x, y):
    # plain 2x2 integer product, independent of the library
    return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def vectors(g):
    return st.lists(st.integers(-4, 4), min_size=2 * g, max_size=2 * g).map(tuple)


def nonzero_vectors(g):
    return vectors(g).filter(any)


# -- pairing -----------------------------------------------------------------------

def test_basis_pairings():
    s = SymplecticSpace(2)
    assert pair(s.basis("a1"), s.basis("b1"), s) == 1
    assert pair(s.basis("b1"), s.basis("a1"), s) == -1
    assert pair(s.basis("a1"), s.basis("a2"), s) == 0


def test_mod2_pairing_example():
    s = SymplecticSpace(2)
    x, y = s.parse("a1 + b2", 2), s.parse("b1 + a2", 2)
    assert pair(x, y, s) == 0


def test_pairing_errors():
    s = SymplecticSpace(2)
    with pytest.raises(UsageError):
        pair(s.parse("a1", 2), s.parse("b1"), s)
    with pytest.raises(UsageError):
        pair(SymplecticSpace(1).basis("a1"), SymplecticSpace(1).basis("b1"), s)
    with pytest.raises(UsageError):
        s.parse("a3")


@given(vectors(3), vectors(3))
def test_pairing_is_skew(x, y):
    s = SymplecticSpace(3)
    assert pair(HomologyVector(x), HomologyVector(y), s) == -pair(HomologyVector(y), HomologyVector(x), s)


def test_form_is_unimodular():
    for g in range(1, 5):
        assert round(abs(np.linalg.det(SymplecticSpace(g).form.astype(float)))) == 1


# -- transvections --------------------------------------------------------------------

def test_transvection_example():
    s = SymplecticSpace(1)
    assert transvection(s.basis("a1"), s).tolist() == [[1, -1], [0, 1]]


@given(nonzero_vectors(2))
def test_transvection_properties(c):
    s = SymplecticSpace(2)
    v = HomologyVector(c)
    t = transvection(v, s)
    assert is_in_sp(t)
    assert np.array_equal(t.dot(v.array), v.array)
    diff = (t - identity(4)).astype(float)
    assert np.linalg.matrix_rank(diff) == 1
    assert np.array_equal(t, transvection(-v, s))
    c2 = HomologyVector(tuple(x % 2 for x in c))
    want = identity(4) if c2.is_zero() else transvection(c2, s)
    assert np.array_equal(reduce_mod2(t), reduce_mod2(want))
    assert np.array_equal(reduce_mod2(imatmul(t, t)), identity(4))


def test_transvection_rejects_zero():
    s = SymplecticSpace(2)
    with pytest.raises(UsageError):
        transvection(HomologyVector((0, 0, 0, 0)), s)


@given(nonzero_vectors(2), st.integers(0, 2 ** 32))
def test_conjugation_covariance(c, seed):
    s = SymplecticSpace(2)
    rep = base_representation(s, {"x": "a1", "y": "b1 + a2", "z": "b2", "w": "a1 - b2"})
    _, m = random_element(rep, random.Random(seed), 8)
    v = np.array(c, dtype=object)
    lhs = imatmul(imatmul(m, transvection(HomologyVector(c), s)), symplectic_inverse(m))
    assert np.array_equal(lhs, transvection(HomologyVector(tuple(m.dot(v))), s))


@given(st.integers(0, 2 ** 32))
def test_reduce_mod2_is_multiplicative(seed):
    s = SymplecticSpace(2)
    rep = base_representation(s, {"x": "a1", "y": "b1 + a2", "z": "b2"})
    rng = random.Random(seed)
    (_, m), (_, n) = random_element(rep, rng, 6), random_element(rep, rng, 6)
    assert np.array_equal(reduce_mod2(imatmul(m, n)), reduce_mod2(imatmul(reduce_mod2(m), reduce_mod2(n))))


# -- classification and orderings --------------------------------------------------------

def test_classify():
    assert classify_matrix(identity(4)) == "symplectic"
    assert classify_matrix(z_matrix(2), block_form(2)) == "anti-symplectic"
    assert classify_matrix(from_block(z_matrix(2))) == "anti-symplectic"
    assert classify_matrix(np.diag([2, 1, 1, 1]).astype(object)) == "neither"


def test_block_order_round_trip():
    m = np.arange(36).reshape(6, 6).astype(object)
    assert np.array_equal(from_block(to_block(m)), m)
    assert np.array_equal(to_block(SymplecticSpace(3).form), block_form(3))


# -- words ------------------------------------------------------------------------------

def test_word_examples():
    s = SymplecticSpace(1)
    rep = base_representation(s, {"a": "a1", "b": "b1"})
    ta, tb = rep.images["a"].tolist(), rep.images["b"].tolist()
    oracle = mul2(mul2(ta, ta), tb)
    assert oracle == [[-1, -2], [1, 1]]
    w = TwistWord.parse("a^2 b")
    assert eval_word(w, rep).tolist() == oracle
    assert eval_word(w ** 4, rep).tolist() == [[1, 0], [0, 1]]
    assert eval_word(TwistWord(), rep).tolist() == [[1, 0], [0, 1]]


def test_word_inverse_and_unknown_generator():
    s = SymplecticSpace(2)
    rep = base_representation(s, {"a": "a1", "c": "b1 + a2"})
    w = TwistWord.parse("a^3 c^-2 a")
    assert np.array_equal(imatmul(eval_word(w, rep), eval_word(w.inverse(), rep)), identity(4))
    assert str(w) == "a^3 c^-2 a" and len(w) == 6
    with pytest.raises(UsageError):
        eval_word(TwistWord.of("q"), rep)


# -- the congruence subgroup and its character ------------------------------------------

def _u(p=1):
    # U e1 = e1 + e2 in the 2x2 case, i.e. the transvection by b1 with the opposite sign
    return imatpow(np.array([[1, 0], [1, 1]], dtype=object), p)


def test_lambda_membership_examples():
    assert in_lambda_p(identity(2), 2)
    assert not in_lambda_p(_u(), 2)
    assert in_lambda_p(_u(2), 2)
    for p in (2, 3, 5, 7):
        assert in_lambda_p(_u(p), p)
    with pytest.raises(UsageError):
        in_lambda_p(identity(2), 1)


def test_phi_examples():
    assert phi_p(identity(4), 3) == 0
    # e1 -> e1 + a with pair(e1, a) = 1: a = b1, displacement p b1, pair(p b1, e1) / p = -1
    t = np.array([[1, 0], [-1, 1]], dtype=object)
    assert t.dot(np.array([1, 0], dtype=object)).tolist() == [1, -1]
    for p in (2, 3, 5, 7):
        assert phi_p(imatpow(_u(), p), p) == (-1) % p
        assert phi_p(imatpow(t, p), p) == 1 % p
    with pytest.raises(UsageError):
        phi_p(_u(), 2)


def test_strict_reading():
    s = SymplecticSpace(2)
    gens = lambda_p_generators(s, 3)
    t = gens["T(b1)^3"]
    assert in_lambda_p(t, 3, strict=True)
    assert in_lambda_p(t, 3)
    tb2 = gens["T(b1+a2)^3"]
    assert in_lambda_p(tb2, 3) and not in_lambda_p(tb2, 3, strict=True)


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 5]))
def test_phi_additive(seed, p):
    s = SymplecticSpace(2)
    from prymcheck.symplectic import Representation

    rep = Representation(lambda_p_generators(s, p), 4)
    rng = random.Random(seed)
    (_, a), (_, b) = random_element(rep, rng, 8), random_element(rep, rng, 8)
    assert is_in_sp(a)
    assert phi_p(imatmul(a, b), p) == (phi_p(a, p) + phi_p(b, p)) % p
