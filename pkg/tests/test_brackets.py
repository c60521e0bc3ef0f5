from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jordconf.brackets import (
    BracketKind, antisymmetry_residual, bracket_derivation, jacobi_residual, jordan_bracket_D,
    jordan_bracket_axiom_residuals, kbracket, leibniz_residual, monomials, pbracket,
)
from jordconf.spoly import Signature, SPoly, partial

P2 = Signature(2, 0)
P02 = Signature(0, 2)
K1 = Signature(1, 0)
K12 = Signature.laurent(2)


def var(sig, name):
    return SPoly.var(sig, name)


def one(sig):
    return SPoly.const(sig)


def test_poisson_examples():
    assert pbracket(var(P2, "p1"), var(P2, "q1")) == one(P2)
    assert pbracket(var(P02, "xi1"), var(P02, "xi2")) == -one(P02)
    assert not pbracket(one(P2), var(P2, "p1") * var(P2, "q1"))


def test_contact_examples():
    t = var(K1, "t")
    assert kbracket(one(K1), t) == one(K1).scale(2)
    assert kbracket(t, one(K1)) == one(K1).scale(-2)
    assert kbracket(var(K12, "xi1"), var(K12, "xi2")) == -one(K12)


def test_bracket_derivation():
    kind = BracketKind("kbracket", K1)
    t = var(K1, "t")
    assert bracket_derivation(t, kind) == one(K1).scale(-2)
    assert bracket_derivation(t * t, kind) == t.scale(-4)
    pk = BracketKind("pbracket", P2)
    assert not bracket_derivation(var(P2, "p1") * var(P2, "q1"), pk)


def test_jordan_bracket_D_examples():
    kind = BracketKind("kbracket", K1)
    t = var(K1, "t")
    assert jordan_bracket_D(t, one(K1), kind) == -one(K1)
    assert not jordan_bracket_D(one(K1), one(K1), kind)
    pk = BracketKind("pbracket", P2)
    f, g = var(P2, "p1"), var(P2, "q1") * var(P2, "p1")
    assert jordan_bracket_D(f, g, pk) == pbracket(f, g)


def test_bracket_kind_rejects_wrong_shape():
    with pytest.raises(ValueError):
        BracketKind("kbracket", P2)
    with pytest.raises(ValueError):
        BracketKind("pbracket", K1)


def test_contact_derivation_is_minus_two_d_dt():
    kind = BracketKind("kbracket", K12)
    for m in monomials(K12, -2, 3):
        assert bracket_derivation(m, kind) == partial("t", m).scale(-2)


def _jordan_bracket(kind):
    return lambda f, g: jordan_bracket_D(f, g, kind)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_jordan_bracket_axioms_on_contact_monomials(n):
    sig = Signature(1, n)
    kind = BracketKind("kbracket", sig)
    br = _jordan_bracket(kind)
    D = lambda f: partial("t", f).scale(-1)  # D/2 with D = {., 1}
    elems = monomials(sig, 0, 2 if n < 2 else 1)
    for a, b, c in product(elems, repeat=3):
        assert not any(jordan_bracket_axiom_residuals(a, b, c, br, D))


def test_poisson_bracket_is_jordan_with_zero_derivation():
    p, q = var(P2, "p1"), var(P2, "q1")
    zero = lambda f: f.scale(0)
    assert not any(jordan_bracket_axiom_residuals(p, q, p * q, pbracket, zero))


def test_symmetric_defect_breaks_antisymmetry():
    sig = Signature(1, 1)
    kind = BracketKind("kbracket", sig)
    bad = lambda f, g: jordan_bracket_D(f, g, kind) + f * g
    D = lambda f: partial("t", f).scale(-1)
    t = var(sig, "t")
    r1, _, _ = jordan_bracket_axiom_residuals(t, t, t, bad, D)
    assert r1


@pytest.mark.parametrize("sig", [Signature(2, 1), Signature(1, 2), Signature(0, 3)])
def test_antisymmetry_and_jacobi(sig):
    br = pbracket if sig.m % 2 == 0 else kbracket
    elems = monomials(sig, 0, 1)
    for f, g in product(elems, repeat=2):
        assert not antisymmetry_residual(f, g, br)
    for a, b, c in product(elems[:12], repeat=3):
        assert not jacobi_residual(a, b, c, br)


def test_contact_leibniz_law():
    sig = Signature(1, 2)
    kind = BracketKind("kbracket", sig)
    D = lambda f: bracket_derivation(f, kind)
    for a, b, c in product(monomials(sig, 0, 1), repeat=3):
        assert not leibniz_residual(a, b, c, kbracket, D)


exps = st.integers(min_value=-2, max_value=3)
masks = st.integers(min_value=0, max_value=3)


@given(exps, masks, exps, masks, exps, masks)
@settings(max_examples=60)
def test_contact_jacobi_random(e1, m1, e2, m2, e3, m3):
    mono = lambda e, m: SPoly(K12, {((e,), m): 1})
    a, b, c = mono(e1, m1), mono(e2, m2), mono(e3, m3)
    assert not jacobi_residual(a, b, c, kbracket)
