from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jordconf.annihilation import (
    ad_eigenvalues, bridge_residual, current_realization, differential_residual, gbinom,
    js1_realization, jn_realization, kkm_signature, realization, sl2_assign, sl2_residuals,
    tkk_embed, tkk_product_residual,
)
from jordconf.brackets import kbracket, monomials
from jordconf.conformal import FiniteAlgebra, cur
from jordconf.constructions import build_JS1, build_Jn
from jordconf.jordan import JS_SIG, KKMElem, kkm_basis
from jordconf.spoly import SPoly


def test_generalized_binomial():
    assert gbinom(5, 2) == 10
    assert gbinom(-1, 3) == -1
    assert gbinom(0, 1) == 0
    assert gbinom(3, -1) == 0


def test_coefficient_examples():
    J = build_Jn(1)
    real = jn_realization(J)
    sig = real.coef(J.basis("1+"), 0).sig
    xi_t2 = SPoly(sig, {((2,), 1): 1})
    assert real.coef(J.basis("ξ1-"), 2) == KKMElem.theta_part(xi_t2)
    assert not real.coef(J.basis("1+").d(), 0)
    JS = build_JS1()
    js1_realization(JS)
    assert realization(JS).coef(JS.basis("T"), -1) == SPoly(JS_SIG, {((-1,), 0): 1})


def test_unregistered_algebra():
    with pytest.raises(KeyError):
        realization(build_Jn(0))


def test_pinning_examples_on_j0():
    J = build_Jn(0)
    jn_realization(J)
    m = J.basis("1-")
    assert not bridge_residual(m, m, 0, 0)
    assert not bridge_residual(m, m, 1, 0)
    # dropping the j! shows up once the product has a lambda^2 term
    window = product(range(-3, 4), repeat=2)
    assert any(bridge_residual(m.d(), m, a, b, jfactor=False) for a, b in window)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_bridge_jn(n):
    J = build_Jn(n)
    jn_realization(J)
    B = [J.basis(i) for i in range(J.rank)]
    for x, y in product(B, repeat=2):
        for m, k in product(range(-2, 3), repeat=2):
            assert not bridge_residual(x, y, m, k)


def test_bridge_js1():
    JS = build_JS1()
    js1_realization(JS)
    B = [JS.basis(i) for i in range(2)]
    for x, y in product(B, repeat=2):
        for m, k in product(range(-3, 4), repeat=2):
            assert not bridge_residual(x, y, m, k)


def test_bridge_current_algebra():
    base = FiniteAlgebra("F", ["e"], [0], {(0, 0): {0: 1}})
    C = cur(base)
    current_realization(C, base)
    e = C.basis(0)
    for m, k in product(range(-3, 4), repeat=2):
        assert not bridge_residual(e, e, m, k)
        assert not bridge_residual(e.d(), e, m, k)


@pytest.mark.parametrize("name", ["J0", "J1", "JS1"])
def test_differential_compatibility(name):
    alg = build_JS1() if name == "JS1" else build_Jn(int(name[1]))
    (js1_realization if name == "JS1" else jn_realization)(alg)
    for i, k in product(range(alg.rank), range(-3, 4)):
        assert not differential_residual(alg, i, k)


coef_spec = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(-3, 3)), max_size=3)


@given(coef_spec, coef_spec, st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_bridge_on_random_module_elements(xs, ys, m, k):
    J = build_Jn(1)
    jn_realization(J)

    def make(spec):
        out = J.zero()
        for i, q, c in spec:
            out = out + J.basis(i).d(q).scale(c)
        return out

    assert not bridge_residual(make(xs), make(ys), m, k)


def test_tkk_embed_examples():
    for n in range(3):
        sig = kkm_signature(n)
        one = SPoly.const(sig)
        t = sl2_assign(n).sig
        xi = lambda i: SPoly.var(t, f"xi{i}")
        assert tkk_embed(KKMElem.even_part(one), n) == xi(n + 1) * xi(n + 3)
        assert tkk_embed(KKMElem.theta_part(one), n) == xi(n + 3)
    sig = kkm_signature(1)
    x = KKMElem(SPoly.var(sig, "t"), SPoly.var(sig, "xi1"))
    tsig = sl2_assign(1).sig
    v = lambda name: SPoly.var(tsig, name)
    assert tkk_embed(x, 1) == (v("t") * v("xi2") + v("xi1")) * v("xi4")


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_sl2_triple(n):
    trip = sl2_assign(n)
    assert not any(sl2_residuals(trip).values())
    assert sorted(ad_eigenvalues(trip)) == [-2, 0, 2]


def test_sl2_brackets_close_on_the_triple():
    # e, h, f are scaled monomials, so their span is spanned by their supports
    trip = sl2_assign(0)
    span = [trip.e, trip.h, trip.f]
    support = {k for s in span for k in s.terms}
    for a, b in product(span, repeat=2):
        assert set(kbracket(a, b).terms) <= support


def test_tkk_unit_and_exhaustive_p11():
    n = 1
    trip = sl2_assign(n)
    sig = kkm_signature(n)
    unit = KKMElem.even_part(SPoly.const(sig))
    assert not tkk_product_residual(unit, unit, trip)
    elems = kkm_basis(monomials(sig, 0, 2))
    for x, y in product(elems, repeat=2):
        assert not tkk_product_residual(x, y, trip)


def test_tkk_mutated_embedding_is_detected():
    n = 1
    trip = sl2_assign(n)
    elems = kkm_basis(monomials(kkm_signature(n), 0, 1))
    assert any(tkk_product_residual(x, y, trip, right=n + 2) for x, y in product(elems, repeat=2))


def test_untwisted_theta_embedding_fails_only_on_theta_pairs():
    n = 0
    trip = sl2_assign(n)
    elems = kkm_basis(monomials(kkm_signature(n), 0, 2))
    bad = [(x, y) for x, y in product(elems, repeat=2)
           if tkk_product_residual(x, y, trip, theta_scale=1)]
    assert bad
    assert all(x.b and y.b for x, y in bad)
