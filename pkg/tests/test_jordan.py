from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jordconf.brackets import BracketKind, monomials
from jordconf.jordan import (
    JS_SIG, KKMElem, LinearMap, SparseVec, TableProduct, comm_residual, d_theta, is_derivation,
    js11_mul, js_basis, js_parity, kkm_basis, kkm_mul, lin_jordan_residual, xi_delta,
    xi_double_basis, xi_double_mul,
)
from jordconf.spoly import Signature, SPoly, partial, smul

K1 = Signature.laurent(0)
W02 = Signature(0, 2)


def t_pow(sig, k, mask=0):
    return SPoly(sig, {((k,), mask): 1})


def kkm(sig):
    kind = BracketKind("kbracket", sig)
    return lambda x, y: kkm_mul(x, y, kind)


def test_kkm_examples():
    mul = kkm(K1)
    one, t = SPoly.const(K1), t_pow(K1, 1)
    assert mul(KKMElem.even_part(t), KKMElem.even_part(t)) == KKMElem.even_part(t * t)
    assert not mul(KKMElem.theta_part(one), KKMElem.theta_part(one))
    assert mul(KKMElem.theta_part(t), KKMElem.theta_part(one)) == KKMElem.even_part(-one)


def test_js11_examples():
    one, t = t_pow(JS_SIG, 0), t_pow(JS_SIG, 1)
    for k in range(-2, 4):
        assert js11_mul(t_pow(JS_SIG, k, 1), one) == t_pow(JS_SIG, k)
    assert not js11_mul(one, one)
    assert js11_mul(t, t, "literal") == t_pow(JS_SIG, 1, 1).scale(2)


def test_js11_rejects_unknown_convention():
    with pytest.raises(ValueError):
        js11_mul(t_pow(JS_SIG, 0), t_pow(JS_SIG, 0), "other")


def _exterior_basis():
    return [SPoly(W02, {((), m): 1}) for m in range(4)]


def test_associative_supercommutative_product_is_jordan():
    B = _exterior_basis()
    for q in product(B, repeat=4):
        assert not lin_jordan_residual(*q, smul)


def test_mutated_product_breaks_jordan_identity():
    d1 = lambda f: partial("xi1", f)
    bad = lambda a, b: smul(a, d1(b)) + smul(d1(a), b)
    B = _exterior_basis()
    assert any(lin_jordan_residual(*q, bad) for q in product(B, repeat=4))


def test_comm_residual():
    x1, x2 = (SPoly.var(W02, v) for v in ("xi1", "xi2"))
    assert not comm_residual(x1, x2, smul)
    one_sided = lambda a, b: smul(partial("xi1", a), b)
    assert comm_residual(x1, x2, one_sided)


@pytest.mark.parametrize("n", [0, 1])
def test_kkm_jordan_on_small_basis(n):
    sig = Signature.laurent(n)
    mul = TableProduct(kkm(sig), sig, kkm=True)
    elems = [mul.lift(x) for x in kkm_basis(monomials(sig, 0, 1))]
    for a, b in product(elems, repeat=2):
        assert not comm_residual(a, b, mul, mul.parity)
    for q in product(elems, repeat=4):
        assert not lin_jordan_residual(*q, mul, mul.parity)


def test_table_product_matches_direct_product():
    sig = Signature.laurent(1)
    direct = kkm(sig)
    mul = TableProduct(direct, sig, kkm=True)
    elems = kkm_basis(monomials(sig, -1, 2))
    for x, y in product(elems, repeat=2):
        assert mul.lower(mul(mul.lift(x), mul.lift(y))) == direct(x, y)


def test_js11_jordan_and_commutativity():
    mul = TableProduct(js11_mul, JS_SIG, reversed_parity=True)
    elems = [mul.lift(x) for x in js_basis(-1, 2)]
    for a, b in product(elems, repeat=2):
        assert not comm_residual(a, b, mul, mul.parity)
    for q in product(elems, repeat=4):
        assert not lin_jordan_residual(*q, mul, mul.parity)


def test_d_theta_is_a_derivation():
    sig = Signature.laurent(1)
    elems = kkm_basis(monomials(sig, 0, 2))
    rep = is_derivation(d_theta(), kkm(sig), product(elems, repeat=2))
    assert rep.ok and rep.summary["total"] == len(elems) ** 2
    assert d_theta()(KKMElem.theta_part(SPoly.const(sig))) == KKMElem.even_part(SPoly.const(sig))


def test_delta_on_the_two_dimensional_double():
    B = xi_double_basis()
    rep = is_derivation(xi_delta(), xi_double_mul, product(B, repeat=2))
    assert rep.ok and rep.summary["total"] == 16


def test_d_dt_on_js11():
    ddt = LinearMap(0, lambda m: partial("t", m), "d/dt")
    B = js_basis(0, 3)
    rep = is_derivation(ddt, js11_mul, product(B, repeat=2), js_parity)
    assert rep.ok


def test_non_derivation_is_reported():
    double = LinearMap(0, lambda m: m.scale(2), "double")
    B = js_basis(0, 2)
    rep = is_derivation(double, js11_mul, product(B, repeat=2), js_parity)
    assert not rep.ok


keys = st.tuples(st.integers(-2, 2), st.integers(0, 3))
vecs = st.dictionaries(keys, st.integers(-5, 5).filter(bool), max_size=4).map(SparseVec)


@given(vecs, vecs, vecs)
def test_sparse_vec_arithmetic(u, v, w):
    assert (u + v) + w == u + (v + w)
    assert not (u - u)
    assert u + v == v + u
    assert (u + v).scale(3) == u.scale(3) + v.scale(3)


mono_strategy = st.tuples(st.integers(-1, 2), st.integers(0, 3), st.booleans())


def _kkm_mono(sig, spec):
    k, mask, theta = spec
    m = SPoly(sig, {((k,), mask): 1})
    return KKMElem.theta_part(m) if theta else KKMElem.even_part(m)


@given(mono_strategy, mono_strategy, mono_strategy, mono_strategy)
@settings(max_examples=40, deadline=None)
def test_kkm_jordan_random_quadruples(a, b, c, d):
    sig = Signature.laurent(2)
    mul = kkm(sig)
    q = [_kkm_mono(sig, s) for s in (a, b, c, d)]
    assert not comm_residual(q[0], q[1], mul)
    assert not lin_jordan_residual(*q, mul)
