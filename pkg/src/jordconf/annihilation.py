"""Coefficient realizations of conformal algebras, the binomial bridge, and TKK checks.

A realization sends the pair (basis vector e_i, k) to the k-th coefficient of
the formal distribution e_i(z) = sum_k coef_k(e_i) z^{-k-1} inside an ordinary
superalgebra.  It extends to F[d]-combinations by coef_k(d x) = -k coef_{k-1}(x).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Dict, List, Optional, Tuple

from .brackets import BracketKind, kbracket
from .conformal import LAM, NVARS, CAlgebra, FiniteAlgebra, FormalPoly, jth_product, lprod
from .field import ALPHA, Scalar, canon, inv
from .jordan import JS_SIG, KKMElem, js11_mul, kkm_mul
from .spoly import Signature, SPoly


def gbinom(m: int, j: int) -> Fraction:
    """Generalized binomial m(m-1)...(m-j+1)/j! for any integer m and j >= 0."""
    if j < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(j):
        out = out * (m - i) / (i + 1)
    return out


def falling(k: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= k - i
    return out


@dataclass
class CoefRealization:
    """Registered realization of a conformal algebra.

    ``basis_coef(i, k)`` returns the target element for e_i at mode k;
    ``mul`` is the target product, ``zero`` the target zero.
    """

    source: CAlgebra
    target: str
    basis_coef: Callable[[int, int], object]
    mul: Callable[[object, object], object]
    zero: Callable[[], object]

    def coef(self, x: FormalPoly, k: int):
        """coef_k of a module element: coef_k(d^q e_i) = (-1)^q k(k-1)..(k-q+1) coef_{k-q}(e_i)."""
        out = self.zero()
        for key, c in x.terms.items():
            if any(key[:NVARS]):
                raise ValueError("coefficients are defined for lambda-free elements only")
            q, i = key[NVARS], key[-1]
            f = falling(k, q)
            if f == 0:
                continue
            out = out + self.basis_coef(i, k - q).scale(canon(c * f * (-1) ** q))
        return out


def register(alg: CAlgebra, real: CoefRealization) -> CoefRealization:
    alg.meta["realization"] = real
    return real


def realization(alg: CAlgebra) -> CoefRealization:
    real = alg.meta.get("realization")
    if real is None:
        raise KeyError(f"no coefficient realization registered for {alg.name}")
    return real


def coef_realize(alg: CAlgebra, index: int, k: int):
    return realization(alg).basis_coef(index, k)


# registered realizations ------------------------------------------------------------

def jn_realization(J: CAlgebra) -> CoefRealization:
    """a^+ -> (a t^k, 0), a^- -> (0, a t^k) in K(P(1,n)) with the pairing of J."""
    n = J.meta["n"]
    pairing = J.meta.get("pairing") or "hyperbolic"
    sig = Signature.laurent(n, odd_pairing=pairing)
    kind = BracketKind("kbracket", sig)
    masks = J.meta["masks"]
    N = 1 << n

    def basis_coef(i: int, k: int) -> KKMElem:
        mono = SPoly(sig, {((k,), masks[i % N]): 1})
        if i < N:
            return KKMElem.even_part(mono)
        return KKMElem.theta_part(mono)

    zero = lambda: KKMElem.even_part(SPoly.zero(sig))
    return register(J, CoefRealization(J, f"K(P(1,{n}))", basis_coef,
                                       lambda x, y: kkm_mul(x, y, kind), zero))


def js1_realization(JS: CAlgebra, convention: str = "graded") -> CoefRealization:
    """S -> xi t^k, T -> t^k in js(1,1)."""

    def basis_coef(i: int, k: int) -> SPoly:
        return SPoly(JS_SIG, {((k,), 1 if i == 0 else 0): 1})

    return register(JS, CoefRealization(JS, "js(1,1)", basis_coef,
                                        lambda x, y: js11_mul(x, y, convention),
                                        lambda: SPoly.zero(JS_SIG)))


class LoopElem:
    """Finite sum of t^k (x) a in the loop algebra of a finite algebra."""

    __slots__ = ("base", "terms")

    def __init__(self, base: FiniteAlgebra, terms: Dict[Tuple[int, int], Scalar]):
        self.base = base
        self.terms = {k: canon(v) for k, v in terms.items() if v != 0}

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return LoopElem(self.base, out)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c):
        return LoopElem(self.base, {k: v * c for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*t^{k}*{self.base.symbols[i]}" for (k, i), v in sorted(self.terms.items()))


def loop_mul(x: LoopElem, y: LoopElem) -> LoopElem:
    out: Dict[Tuple[int, int], Scalar] = {}
    for (k1, i), a in x.terms.items():
        for (k2, j), b in y.terms.items():
            for k, c in x.base.mult.get((i, j), {}).items():
                key = (k1 + k2, k)
                out[key] = out.get(key, 0) + a * b * c
    return LoopElem(x.base, out)


def current_realization(C: CAlgebra, base: FiniteAlgebra) -> CoefRealization:
    """e_i -> t^k e_i in the loop algebra of the base algebra."""
    return register(C, CoefRealization(C, f"{base.name}[t,t^-1]",
                                       lambda i, k: LoopElem(base, {(k, i): 1}),
                                       loop_mul, lambda: LoopElem(base, {})))


# bridge -------------------------------------------------------------------------------

def bridge_residual(x: FormalPoly, y: FormalPoly, m: int, k: int,
                    real: Optional[CoefRealization] = None, jfactor: bool = True):
    """coef_m(x) * coef_k(y) - sum_j C(m, j) coef_{m+k-j}(x_(j) y).

    ``jfactor=False`` drops the j! of the j-th product (a planted defect).
    """
    real = real or realization(x.alg)
    lhs = real.mul(real.coef(x, m), real.coef(y, k))
    rhs = real.zero()
    prod = lprod(x, LAM, y)
    for j in range(prod.degree_in(LAM) + 1):
        b = gbinom(m, j)
        if b == 0:
            continue
        xy = jth_product(x, y, j) if jfactor else prod.coefficient(LAM, j)
        if not xy:
            continue
        rhs = rhs + real.coef(xy, m + k - j).scale(canon(b))
    return lhs - rhs


def differential_residual(alg: CAlgebra, i: int, k: int):
    """coef_k(d e_i) + k coef_{k-1}(e_i)."""
    real = realization(alg)
    x = alg.basis(i)
    return real.coef(x.d(), k) + real.basis_coef(i, k - 1).scale(k)


# TKK ------------------------------------------------------------------------------------

@dataclass
class SL2Triple:
    n: int
    sig: Signature
    e: SPoly
    h: SPoly
    f: SPoly
    roles: Dict[str, str]
    scales: Dict[str, Scalar]
    table: List[str]


def tkk_signature(n: int) -> Signature:
    """K(1, n+3): diagonal on xi_1..xi_{n+1}, hyperbolic on xi_{n+2}, xi_{n+3}."""
    return Signature.laurent(n + 3, odd_pairing="hyperbolic")


def kkm_signature(n: int) -> Signature:
    """P(1,n) inside K(1,n+3) inherits the diagonal form of xi_1..xi_n."""
    return Signature.laurent(n, odd_pairing="diagonal")


def _odd(sig: Signature, *idx: int) -> SPoly:
    out = SPoly.const(sig)
    for i in idx:
        out = out * SPoly.var(sig, f"xi{i}")
    return out


def _ratio(x: SPoly, y: SPoly) -> Optional[Scalar]:
    """c with x = c*y, or None."""
    if not y:
        return None
    if not x:
        return 0
    key = next(iter(y.terms))
    if key not in x.terms:
        return None
    c = canon(x.terms[key] * inv(y.terms[key]))
    return c if x == y.scale(c) else None


def tkk_embed(x: KKMElem, n: int, target: Optional[Signature] = None,
              right: Optional[int] = None, theta_scale: Scalar = 1) -> SPoly:
    """a + b theta -> (a xi_{n+1} + c b) xi_{n+3} with c = ``theta_scale``.

    ``right`` replaces the index n+3 (used by the mutation suite)."""
    sig = target or tkk_signature(n)
    right = n + 3 if right is None else right

    def lift(p: SPoly) -> SPoly:
        return SPoly(sig, {(exps, mask): c for (exps, mask), c in p.terms.items()})

    return (lift(x.a) * _odd(sig, n + 1) + lift(x.b).scale(theta_scale)) * _odd(sig, right)


def sl2_assign(n: int) -> SL2Triple:
    """Assign e, h, f among the three quadratic monomials and scale them so that
    [h,e] = 2e, [h,f] = -2f, [e,f] = h and the embedded unit satisfies [[u,e],u] = u."""
    sig = tkk_signature(n)
    cands = {
        f"xi{n + 1}xi{n + 2}": _odd(sig, n + 1, n + 2),
        f"xi{n + 3}xi{n + 2}": _odd(sig, n + 3, n + 2),
        f"xi{n + 1}xi{n + 3}": _odd(sig, n + 1, n + 3),
    }
    names = list(cands)
    table = [f"[{a},{b}] = {kbracket(cands[a], cands[b])}" for a in names for b in names if a < b]
    unit = tkk_embed(KKMElem.even_part(SPoly.const(kkm_signature(n))), n, sig)
    for he, hh, hf in permutations(names):
        E, H, F = cands[he], cands[hh], cands[hf]
        # [cH, E] = 2E  ->  c
        ch = _ratio(E.scale(2), kbracket(H, E))
        if ch is None or ch == 0:
            continue
        h = H.scale(ch)
        if kbracket(h, F) != F.scale(-2):
            continue
        # unit normalization fixes the scale of e
        r = _ratio(unit, kbracket(kbracket(unit, E), unit))
        if r is None or r == 0:
            continue
        e = E.scale(r)
        # [e, cf F] = h  ->  cf
        cf = _ratio(h, kbracket(e, F))
        if cf is None or cf == 0:
            continue
        f = F.scale(cf)
        if kbracket(h, e) == e.scale(2) and kbracket(h, f) == f.scale(-2) and kbracket(e, f) == h:
            return SL2Triple(n, sig, e, h, f, {"e": he, "h": hh, "f": hf},
                             {"e": r, "h": ch, "f": cf}, table)
    raise ValueError("no admissible sl2 assignment; brackets: " + "; ".join(table))


def sl2_residuals(t: SL2Triple) -> Dict[str, SPoly]:
    return {
        "[h,e]-2e": kbracket(t.h, t.e) - t.e.scale(2),
        "[h,f]+2f": kbracket(t.h, t.f) + t.f.scale(2),
        "[e,f]-h": kbracket(t.e, t.f) - t.h,
    }


def ad_eigenvalues(t: SL2Triple) -> List[Scalar]:
    vals = []
    for x in (t.e, t.h, t.f):
        c = _ratio(kbracket(t.h, x), x)
        vals.append(c)
    return vals


# With c = 1 the bracket [[a,e],b] reproduces the KKM double of the opposite
# bracket (theta*theta products flip sign); theta -> alpha*theta undoes this.
TKK_THETA_SCALE = ALPHA


def tkk_product_residual(x: KKMElem, y: KKMElem, triple: SL2Triple,
                         right: Optional[int] = None,
                         theta_scale: Scalar = TKK_THETA_SCALE) -> SPoly:
    """[[emb x, e], emb y] - emb(x * y)."""
    n = triple.n
    kind = BracketKind("kbracket", x.sig)
    emb = lambda z: tkk_embed(z, n, triple.sig, right, theta_scale)
    lhs = kbracket(kbracket(emb(x), triple.e), emb(y))
    return lhs - emb(kkm_mul(x, y, kind))
