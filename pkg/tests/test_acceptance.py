"""Acceptance criteria: one test per criterion, each printing a single PASS/FAIL line."""
from collections import Counter

import pytest

from jordconf.cli import run_suite
from jordconf.suites import Config

_cache = {}


def report(name):
    if name not in _cache:
        _cache[name] = run_suite(name, Config())
    return _cache[name]


def entries(rep, check_id, prefix=""):
    return [e for e in rep.entries if e.check_id == check_id and e.instance.startswith(prefix)]


def all_pass(items):
    return bool(items) and all(e.status == "pass" for e in items)


@pytest.fixture
def verdict(capsys):
    def emit(number, title, checks):
        ok = all(c for c, _ in checks)
        detail = "; ".join(msg for _, msg in checks)
        with capsys.disabled():
            print(f"\ncriterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
        for c, msg in checks:
            assert c, msg
    return emit


def test_criterion_01_jn(verdict):
    rep = report("jn")
    per_n = {n: entries(rep, "jn.jordan", f"J_{n}:") for n in range(3)}
    verdict(1, "J_n commutativity and conformal Jordan identity, n = 0, 1, 2", [
        (all_pass(entries(rep, "jn.comm")), f"{len(entries(rep, 'jn.comm'))} commutativity pairs"),
        (all(all_pass(v) for v in per_n.values()),
         "Jordan quadruples " + ", ".join(f"n={n}: {len(v)}" for n, v in per_n.items())),
        (len(per_n[2]) == 4096, "n=2 has 4096 quadruples"),
        (rep.wall_time < 300, f"{rep.wall_time:.1f}s < 300s"),
    ])


def test_criterion_02_js1(verdict):
    rep = report("js1")
    verdict(2, "JS_1 table, commutativity and Jordan identity", [
        (all_pass(entries(rep, "js1.table")), "table matches verbatim"),
        (all_pass(entries(rep, "js1.comm")), "commutativity"),
        (all_pass(entries(rep, "js1.jordan")) and len(entries(rep, "js1.jordan")) == 16,
         "16 Jordan quadruples"),
        (rep.wall_time < 1, f"{rep.wall_time:.2f}s < 1s"),
    ])


def test_criterion_03_kn(verdict):
    rep = report("kn")
    exhaustive = {n: entries(rep, "kn.jacobi", f"K_{n}:") for n in range(5)}
    sampled = entries(rep, "kn.jacobi.sampled", "K_6")
    verdict(3, "K_n anti-commutativity and Jacobi identity", [
        (all_pass(entries(rep, "kn.anticomm")), "anti-commutativity"),
        (all(all_pass(v) and len(v) == 8 ** n for n, v in exhaustive.items()),
         "exhaustive triples for n <= 4"),
        (all_pass(sampled) and len(sampled) >= 1000, f"{len(sampled)} seeded K_6 triples"),
        (rep.wall_time < 300, f"{rep.wall_time:.1f}s < 300s"),
    ])


def test_criterion_04_ck6(verdict):
    rep = report("ck6")
    rank = entries(rep, "ck6.rank")
    verdict(4, "CK_6 rank and closure certificate", [
        (all_pass(rank) and "(16, 16)" in rank[0].instance, "rank (16|16)"),
        (all_pass(entries(rep, "ck6.generators")), "every generator in the reduced span"),
        (all_pass(entries(rep, "ck6.products")) and len(entries(rep, "ck6.products")) == 32 ** 2,
         "all 1024 pairwise products re-enter the span"),
        (all_pass(entries(rep, "ck6.closure")), "closure certificate"),
    ])


def test_criterion_05_jck4(verdict):
    rep = report("jck4")
    verdict(5, "JCK_4 realizations and isomorphism", [
        (all_pass(entries(rep, "jck4.rank")), "eigenspace rank (4|4)"),
        (all_pass(entries(rep, "jck4.j3.rank")), "J_3 span rank (4|4)"),
        (all_pass(entries(rep, "jck4.ck6.jordan")) and all_pass(entries(rep, "jck4.ck6.comm")),
         "Jordan suite in CK_6"),
        (all_pass(entries(rep, "jck4.j3.jordan")) and all_pass(entries(rep, "jck4.j3.comm")),
         "Jordan suite in J_3"),
        (all_pass(entries(rep, "jck4.isomorphism")) and all_pass(entries(rep, "jck4.isomorphism.hom")),
         "isomorphism solved and verified on all 64 products"),
    ])


def test_criterion_06_kkm_brackets(verdict):
    kkm, br = report("kkm"), report("brackets")
    per_n = {n: entries(kkm, "kkm.jordan", f"K(P(1,{n}))") for n in range(3)}
    bracket_ids = sorted({e.check_id for e in br.entries})
    needed = [f"brackets.{k}.{c}" for k in ("kbracket", "pbracket")
              for c in ("antisymmetry", "leibniz", "axiom_i", "axiom_ii", "axiom_iii")]
    verdict(6, "bracket axioms and KKM Jordan identity", [
        (set(needed) <= set(bracket_ids) and br.ok, f"{br.summary['total']} bracket checks"),
        (all_pass(entries(kkm, "kkm.comm")), "KKM commutativity"),
        (all(all_pass(v) for v in per_n.values()),
         "KKM Jordan quadruples " + ", ".join(f"n={n}: {len(v)}" for n, v in per_n.items())),
    ])


def test_criterion_07_bridge(verdict):
    rep = report("bridge")
    first = rep.entries[0]
    algebras = Counter(e.instance.split(":")[0] for e in entries(rep, "bridge.product"))
    verdict(7, "coefficient bridge", [
        (first.check_id == "bridge.pinning" and first.status == "pass", "pinning example first"),
        (all_pass(entries(rep, "bridge.product")),
         "products on " + ", ".join(sorted(algebras))),
        ({"J_0", "J_1", "J_2", "JS_1"} <= set(algebras) and any(a.startswith("Cur") for a in algebras),
         "J_n, JS_1 and a current algebra covered"),
        (all_pass(entries(rep, "bridge.dshift")), "∂-compatibility"),
    ])


def test_criterion_08_tkk(verdict):
    rep = report("tkk")
    sl2 = {n: entries(rep, "tkk.sl2", f"n={n}:") for n in range(4)}
    prod = {n: entries(rep, "tkk.product", f"n={n}:") for n in range(3)}
    verdict(8, "TKK sl2 triples and product compatibility", [
        (all(all_pass(v) for v in sl2.values()), "sl2 relations for n <= 3"),
        (all_pass(entries(rep, "tkk.sl2.eigenvalues")), "ad h eigenvalues"),
        (all(all_pass(v) for v in prod.values()),
         "product pairs " + ", ".join(f"n={n}: {len(v)}" for n, v in prod.items())),
    ])


def test_criterion_09_derivations(verdict):
    rep = report("derivations")
    verdict(9, "derivations", [
        (all_pass(entries(rep, "derivations.d_theta")), "∂_θ on K(P(1,1))"),
        (all_pass(entries(rep, "derivations.delta")), "δ on K(F+Fξ)"),
        (all_pass(entries(rep, "derivations.js11.ddt")), "d/dt on js(1,1)"),
        (all_pass(entries(rep, "derivations.jn.ddt")), "d/dt on K(P(1,n))"),
    ])


def test_criterion_10_mutations(verdict):
    rep = report("mutation")
    muts = [e for e in rep.entries if e.check_id.startswith("mutation.")]
    verdict(10, "planted defects are detected", [
        (len(muts) >= 6, f"{len(muts)} catalogued mutations"),
        (all_pass(muts), "each produces a nonzero residual"),
    ])
