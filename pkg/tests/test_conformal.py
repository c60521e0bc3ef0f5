import json
import random
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jordconf.conformal import (
    LAM, MU, CAlgebra, FiniteAlgebra, assoc_residual, comm_residual_conf, conformal_jordan_residual,
    cur, from_catalog, jacobi_residual, jth_product, lprod, render, sesquilinearity_residuals,
    subst_conjugate, to_catalog,
)
from jordconf.constructions import build_JS1, build_Jn, build_Kn
from jordconf.jordan import lin_jordan_residual

CATALOGS = Path(__file__).resolve().parent.parent / "catalogs"


def unit_algebra():
    return FiniteAlgebra("F", ["e"], [0], {(0, 0): {0: 1}})


def exterior1():
    return FiniteAlgebra("∧(0,1)", ["1", "x"], [0, 1],
                         {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def test_current_product_is_constant_in_lambda():
    C = cur(unit_algebra())
    e = C.basis(0)
    assert lprod(e, LAM, e) == e
    assert lprod(e.d(), LAM, e) == -e.times_var(LAM)
    assert C.rank == 1


def test_current_exterior_rank():
    assert cur(exterior1()).rank_split() == (1, 1)


def test_js1_products():
    JS = build_JS1()
    S, T = JS.basis("S"), JS.basis("T")
    assert lprod(S, LAM, S) == S.scale(2)
    assert lprod(T, LAM, S) == T
    assert lprod(S, LAM, T) == T
    assert render(lprod(T.d(), LAM, T)) == "-2*λ^2*S - λ*∂*S"


def test_subst_conjugate():
    JS = build_JS1()
    S, T = JS.basis("S"), JS.basis("T")
    assert subst_conjugate(T, MU, LAM) == T
    assert subst_conjugate(lprod(T, MU, T), MU, LAM) == -(S.times_var(LAM).scale(2) + S.d())
    assert subst_conjugate(S.times_var(MU), MU, LAM) == -(S.times_var(LAM) + S.d())


def test_js1_commutativity_and_sign_flip():
    JS = build_JS1()
    T = JS.basis("T")
    assert not comm_residual_conf(T, T, +1)
    # negate the lambda term of T_lam T
    JS.set_entry(1, 1, {k: (-c if k[0] == 1 else c) for k, c in JS.entry(1, 1).items()})
    assert comm_residual_conf(T, T, +1)


def test_kn_examples():
    K = build_Kn(2)
    one, w1, w12 = K.basis("1"), K.basis("ω1"), K.basis("ω1ω2")
    assert lprod(one, LAM, one) == -(one.d() + one.times_var(LAM).scale(2))
    assert lprod(w1, LAM, w1) == one.scale(Fraction(-1, 2))
    assert not lprod(w12, LAM, w12)


def test_kn_anticommutativity_and_jacobi():
    K = build_Kn(2)
    B = [K.basis(i) for i in range(K.rank)]
    for x, y in product(B, repeat=2):
        assert not comm_residual_conf(x, y, -1)
    for a, b, c in product(B, repeat=3):
        assert not jacobi_residual(a, b, c)


def test_current_of_lie_algebra_and_defect():
    # sl2 with basis e, h, f
    sl2 = FiniteAlgebra("sl2", ["e", "h", "f"], [0, 0, 0], {
        (1, 0): {0: 2}, (0, 1): {0: -2}, (1, 2): {2: -2}, (2, 1): {2: 2}, (0, 2): {1: 1}, (2, 0): {1: -1}})
    C = cur(sl2, "lie")
    B = [C.basis(i) for i in range(3)]
    assert not any(jacobi_residual(*t) for t in product(B, repeat=3))
    broken = FiniteAlgebra("sym", ["e", "h", "f"], [0, 0, 0], {
        (1, 0): {0: 2}, (0, 1): {0: 2}, (0, 2): {1: 1}, (2, 0): {1: 1}})
    C2 = cur(broken)
    B2 = [C2.basis(i) for i in range(3)]
    assert any(jacobi_residual(*t) for t in product(B2, repeat=3))


def test_assoc_residual():
    C = cur(exterior1())
    B = [C.basis(i) for i in range(2)]
    assert not any(assoc_residual(*t) for t in product(B, repeat=3))
    assert not assoc_residual(C.zero(), B[0], B[1])
    # 2-dim product with x*x = e, e*x = 0, x*e = x: (x x) x = e x = 0, x (x x) = x e = x
    nonassoc = FiniteAlgebra("N", ["e", "x"], [0, 0], {(1, 1): {0: 1}, (1, 0): {1: 1}})
    C2 = cur(nonassoc)
    x = C2.basis(1)
    assert assoc_residual(x, x, x)


def test_jth_products():
    JS = build_JS1()
    S, T = JS.basis("S"), JS.basis("T")
    assert jth_product(T, T, 1) == S.scale(2)
    assert jth_product(T, T, 0) == S.d()
    assert not jth_product(T, T, 2)


def test_current_of_jordan_algebra():
    C = cur(unit_algebra(), "jordan")
    e = C.basis(0)
    assert not conformal_jordan_residual(e, e, e, e)


def test_jn_examples():
    J = build_Jn(2)
    p1, m1 = J.basis("1+"), J.basis("1-")
    assert lprod(p1, LAM, p1) == p1
    assert lprod(m1, LAM, m1) == -(p1.d() + p1.times_var(LAM).scale(2))
    assert lprod(J.basis("ξ1-"), LAM, J.basis("ξ2-")) == p1


def test_j1_conformal_jordan_and_defect():
    J = build_Jn(1)
    B = [J.basis(i) for i in range(J.rank)]
    assert not any(conformal_jordan_residual(*q) for q in product(B, repeat=4))
    m = J.symbols.index("1-")
    entry = {k: (-c if k[0] == 1 else c) for k, c in J.entry(m, m).items()}
    J.set_entry(m, m, entry)
    B = [J.basis(i) for i in range(J.rank)]
    assert any(conformal_jordan_residual(*q) for q in product(B, repeat=4))


def _random_table(rng, dim):
    mult = {}
    for i in range(dim):
        for j in range(i, dim):
            row = {k: rng.randint(-2, 2) for k in range(dim) if rng.random() < 0.5}
            mult[(i, j)] = mult[(j, i)] = row
    return FiniteAlgebra("R", [f"e{i}" for i in range(dim)], [0] * dim, mult)


def test_current_jordan_iff_base_jordan():
    rng = random.Random(7)
    tables = [_random_table(rng, 2) for _ in range(18)]
    tables.append(unit_algebra())
    tables.append(FiniteAlgebra("F2", ["a", "b"], [0, 0], {(0, 0): {0: 1}, (1, 1): {1: 1}}))
    verdicts = set()
    for base in tables:
        V = [base.basis(i) for i in range(base.dim)]
        mul = lambda x, y, b=base: b.mul(x, y)
        finite = any(lin_jordan_residual(*q, mul) for q in product(V, repeat=4))
        C = cur(base)
        B = [C.basis(i) for i in range(C.rank)]
        conf = any(conformal_jordan_residual(*q) for q in product(B, repeat=4))
        assert finite == conf
        verdicts.add(finite)
    assert verdicts == {True, False}


coef = st.integers(-3, 3)


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 2), coef), max_size=3),
       st.lists(st.tuples(st.integers(0, 1), st.integers(0, 2), coef), max_size=3))
@settings(max_examples=50, deadline=None)
def test_sesquilinearity_on_random_elements(xs, ys):
    JS = build_JS1()

    def make(spec):
        out = JS.zero()
        for i, q, c in spec:
            out = out + JS.basis(i).d(q).scale(c)
        return out

    r1, r2 = sesquilinearity_residuals(make(xs), make(ys))
    assert not r1 and not r2


def test_algebra_mismatch_raises():
    with pytest.raises(ValueError):
        lprod(build_JS1().basis(0), LAM, build_Jn(0).basis(0))


def test_parity_violation_rejected():
    with pytest.raises(ValueError):
        CAlgebra("bad", ["a", "b"], [0, 1], {(0, 0): {(0, 0, 1): 1}})


@pytest.mark.parametrize("name,builder", [
    ("J0", lambda: build_Jn(0)), ("J1", lambda: build_Jn(1)), ("JS1", build_JS1)])
def test_catalog_golden_files(name, builder):
    doc = json.loads((CATALOGS / f"{name}.json").read_text(encoding="utf-8"))
    assert to_catalog(builder()) == doc
    again = from_catalog(doc)
    assert to_catalog(again) == doc
