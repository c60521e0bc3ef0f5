"""Jordan superalgebras built from super-polynomials: KKM doubles and js(1,1).

Identity residuals take the product as a plain callable, so the same checkers
serve the KKM double, js(1,1), exterior algebras and planted defects.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .brackets import BracketKind, jordan_bracket_D, pbracket
from .field import Scalar
from .report import VerificationReport
from .spoly import Signature, SPoly, partial, popcount


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


@dataclass(frozen=True)
class KKMElem:
    """a + b*theta in K(A) = A + A*theta, theta odd."""

    a: SPoly
    b: SPoly

    def __post_init__(self):
        self.a._same(self.b)

    @property
    def sig(self) -> Signature:
        return self.a.sig

    @classmethod
    def even_part(cls, a: SPoly) -> "KKMElem":
        return cls(a, SPoly.zero(a.sig))

    @classmethod
    def theta_part(cls, b: SPoly) -> "KKMElem":
        return cls(SPoly.zero(b.sig), b)

    def parity(self) -> Optional[int]:
        pa, pb = self.a.parity(), self.b.parity()
        if self.a.is_zero() and self.b.is_zero():
            return 0
        if self.b.is_zero():
            return pa
        if self.a.is_zero():
            return None if pb is None else pb ^ 1
        if pa is None or pb is None or pa != pb ^ 1:
            return None
        return pa

    def __add__(self, other: "KKMElem") -> "KKMElem":
        return KKMElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "KKMElem") -> "KKMElem":
        return KKMElem(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "KKMElem":
        return KKMElem(-self.a, -self.b)

    def scale(self, c: Scalar) -> "KKMElem":
        return KKMElem(self.a.scale(c), self.b.scale(c))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, KKMElem):
            return self.a == other.a and self.b == other.b
        if other == 0:
            return not self
        return NotImplemented

    __hash__ = None

    def __str__(self):
        if not self:
            return "0"
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.b:
            parts.append(f"({self.b})*theta")
        return " + ".join(parts)


def kkm_mul(x: KKMElem, y: KKMElem,
            kind: Union[BracketKind, Callable[[SPoly, SPoly], SPoly]]) -> KKMElem:
    """KKM double product.

    ``kind`` is a BracketKind (the bracket {.,.}_D of the generalized Poisson
    structure is then used) or directly a Jordan bracket callable.
    """
    x.a._same(y.a)
    jb = kind if callable(kind) else (lambda f, g: jordan_bracket_D(f, g, kind))
    sig = x.sig
    a_out = x.a * y.a
    b_out = x.a * y.b
    for pb, part in y.a.parts().items():
        b_out = b_out + (x.b * part).scale(_sign(pb))
    for pb, part in y.b.parts().items():
        if x.b:
            a_out = a_out + jb(x.b, part).scale(_sign(pb))
    return KKMElem(a_out, b_out) if b_out.sig == sig else KKMElem(a_out, b_out)


def kkm_basis(monos: Iterable[SPoly]) -> List[KKMElem]:
    out = []
    for m in monos:
        out.append(KKMElem.even_part(m))
        out.append(KKMElem.theta_part(m))
    return out


# js(1,1) ----------------------------------------------------------------------

JS_SIG = Signature.laurent(1, odd_pairing="diagonal")


def js_D(f: SPoly) -> SPoly:
    """D = d/dxi + xi d/dt on the algebra in t and a single odd xi."""
    xi = SPoly.var(f.sig, "xi1")
    return partial("xi1", f) + xi * partial("t", f)


def js_parity(f: SPoly) -> Optional[int]:
    """Parity in js(1,1): reversed with respect to the exterior algebra."""
    p = f.parity()
    return None if p is None else p ^ 1


def js11_mul(x: SPoly, y: SPoly, convention: str = "graded") -> SPoly:
    """Product on js(1,1).

    ``convention="literal"`` is the rule a*b = a D(b) + (-1)^{|b|} D(a) b
    with |b| the exterior-algebra parity; it is not supercommutative for the
    reversed grading (t*t = 2 xi t although t is odd).  ``"graded"`` is

        a*b = D(a) b + (-1)^{|a|'|b|'} a D(b),   |.|' the reversed parity,

    which keeps xi t^k * 1 = t^k, is supercommutative, and is the product the
    formal distributions S, T of JS_1 realize.
    """
    if convention not in ("graded", "literal"):
        raise ValueError(f"unknown js(1,1) convention {convention!r}")
    out = SPoly.zero(x.sig)
    for pa, xa in x.parts().items():
        for pb, yb in y.parts().items():
            if convention == "literal":
                out = out + xa * js_D(yb) + (js_D(xa) * yb).scale(_sign(pb))
            else:
                out = out + js_D(xa) * yb + (xa * js_D(yb)).scale(_sign((pa ^ 1) * (pb ^ 1)))
    return out


def js_basis(tmin: int = 0, tmax: int = 3) -> List[SPoly]:
    out = []
    for k in range(tmin, tmax + 1):
        out.append(SPoly(JS_SIG, {((k,), 0): 1}))
        out.append(SPoly(JS_SIG, {((k,), 1): 1}))
    return out


# identity residuals -----------------------------------------------------------

def _par(parity: Optional[Callable], x) -> int:
    p = parity(x) if parity else x.parity()
    if p is None:
        raise ValueError(f"non-homogeneous element {x}")
    return p


def comm_residual(a, b, product: Callable, parity: Optional[Callable] = None):
    """a*b - (-1)^{|a||b|} b*a."""
    pa, pb = _par(parity, a), _par(parity, b)
    return product(a, b) - product(b, a).scale(_sign(pa * pb))


def lin_jordan_residual(a, b, c, d, product: Callable, parity: Optional[Callable] = None):
    """LHS - RHS of the linearized Jordan identity on a homogeneous quadruple."""
    pa, pb, pc = _par(parity, a), _par(parity, b), _par(parity, c)
    _par(parity, d)
    m = product
    s_ac, s_ab, s_bc = _sign(pa * pc), _sign(pa * pb), _sign(pb * pc)
    ab, bc, ca = m(a, b), m(b, c), m(c, a)
    lhs = m(ab, m(c, d)).scale(s_ac) + m(bc, m(a, d)).scale(s_ab) + m(ca, m(b, d)).scale(s_bc)
    rhs = (m(a, m(bc, d)).scale(s_ac) + m(b, m(ca, d)).scale(s_ab)
           + m(c, m(ab, d)).scale(s_bc))
    return lhs - rhs


# derivations --------------------------------------------------------------------

def monomial_terms(x) -> List[Tuple[Scalar, object]]:
    """Split an SPoly or KKMElem into (coefficient, unit monomial) pairs."""
    if isinstance(x, SPoly):
        return [(c, SPoly(x.sig, {key: 1})) for key, c in x.terms.items()]
    if isinstance(x, KKMElem):
        zero = SPoly.zero(x.sig)
        out = [(c, KKMElem(SPoly(x.sig, {key: 1}), zero)) for key, c in x.a.terms.items()]
        out += [(c, KKMElem(zero, SPoly(x.sig, {key: 1}))) for key, c in x.b.terms.items()]
        return out
    raise TypeError(f"cannot decompose {type(x).__name__}")


def _mono_key(m) -> tuple:
    if isinstance(m, SPoly):
        return next(iter(m.terms))
    if m.a:
        return (0,) + next(iter(m.a.terms))
    return (1,) + next(iter(m.b.terms))


class SparseVec(dict):
    """Coefficient vector over monomial keys, with the arithmetic the residuals need."""

    def __add__(self, other):
        out = SparseVec(self)
        for k, c in other.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if c == 0:
            return SparseVec()
        return SparseVec({k: v * c for k, v in self.items()})

    def __bool__(self):
        return len(self) > 0


class TableProduct:
    """Bilinear product on SparseVec, memoized on pairs of monomial keys.

    ``lift`` turns an SPoly or KKMElem into a SparseVec, ``lower`` goes back.
    Identity checks over monomial quadruples revisit the same monomial products
    many times, so this is much faster than multiplying the objects directly.
    """

    def __init__(self, product: Callable, sig: Signature, kkm: bool = False,
                 reversed_parity: bool = False):
        self.product = product
        self.sig = sig
        self.kkm = kkm
        self.flip = 1 if reversed_parity else 0
        self.cache: dict = {}

    def lift(self, x) -> SparseVec:
        return SparseVec({_mono_key(m): c for c, m in monomial_terms(x)})

    def _unit(self, key):
        if not self.kkm:
            return SPoly(self.sig, {key: 1})
        zero = SPoly.zero(self.sig)
        mono = SPoly(self.sig, {key[1:]: 1})
        return KKMElem(mono, zero) if key[0] == 0 else KKMElem(zero, mono)

    def lower(self, v: SparseVec):
        if not self.kkm:
            return SPoly(self.sig, dict(v))
        a = SPoly(self.sig, {k[1:]: c for k, c in v.items() if k[0] == 0})
        b = SPoly(self.sig, {k[1:]: c for k, c in v.items() if k[0] == 1})
        return KKMElem(a, b)

    def parity(self, v: SparseVec) -> Optional[int]:
        ps = set()
        for k in v:
            p = popcount(k[-1]) & 1
            ps.add(p ^ k[0] if self.kkm else p ^ self.flip)
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def __call__(self, x: SparseVec, y: SparseVec) -> SparseVec:
        out: dict = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                r = self.cache.get((k1, k2))
                if r is None:
                    r = self.cache[(k1, k2)] = self.lift(self.product(self._unit(k1), self._unit(k2)))
                for k, c in r.items():
                    out[k] = out.get(k, 0) + c1 * c2 * c
        return SparseVec({k: c for k, c in out.items() if c != 0})


class LinearMap:
    """Homogeneous linear map given by its action on monomials."""

    def __init__(self, parity: int, rule: Callable, name: str = "map"):
        self.parity = parity
        self.rule = rule
        self.name = name

    def __call__(self, x):
        total = None
        for c, mono in monomial_terms(x):
            img = self.rule(mono)
            if img is None:
                raise ValueError(f"{self.name} is not defined on {mono}")
            img = img.scale(c)
            total = img if total is None else total + img
        if total is None:
            return x.scale(0)
        return total


def derivation_residual(delta: LinearMap, x, y, product: Callable,
                        parity: Optional[Callable] = None):
    """delta(x*y) - delta(x)*y - (-1)^{|delta||x|} x*delta(y)."""
    px = _par(parity, x)
    return (delta(product(x, y)) - product(delta(x), y)
            - product(x, delta(y)).scale(_sign(delta.parity * px)))


def is_derivation(delta: LinearMap, product: Callable, pairs: Iterable[Tuple[object, object]],
                  parity: Optional[Callable] = None, check_id: Optional[str] = None,
                  report: Optional[VerificationReport] = None) -> VerificationReport:
    """Check the graded Leibniz rule of ``delta`` on each pair."""
    rep = report if report is not None else VerificationReport(f"derivation:{delta.name}")
    cid = check_id or f"derivation.{delta.name}"
    for x, y in pairs:
        rep.check(cid, f"({x}, {y})", derivation_residual(delta, x, y, product, parity))
    return rep


def d_theta() -> LinearMap:
    """Odd derivation of K(A): d_theta(a + b theta) = (-1)^{|b|} b."""

    def rule(m: KKMElem):
        if m.b:
            return KKMElem.even_part(m.b.scale(_sign(m.b.parity())))
        return KKMElem.even_part(SPoly.zero(m.sig))

    return LinearMap(1, rule, "d_theta")


def a_d_theta(c: SPoly) -> LinearMap:
    """x -> c * d_theta(x) for homogeneous c in A."""
    pc = c.parity()
    if pc is None:
        raise ValueError("multiplier must be homogeneous")
    base = d_theta()

    def rule(m: KKMElem):
        img = base(m)
        return KKMElem.even_part(c * img.a)

    return LinearMap(pc ^ 1, rule, f"({c})*d_theta")


def lift_even_derivation(d: Callable[[SPoly], SPoly], name: str = "d") -> LinearMap:
    """Extend an even derivation of A to K(A) by d(a theta) = d(a) theta."""

    def rule(m: KKMElem):
        return KKMElem(d(m.a), d(m.b))

    return LinearMap(0, rule, name)


# the two-dimensional Poisson algebra F + F xi with {xi, xi} = 1 -------------------

XI_SIG = Signature(0, 1, "polynomial", "diagonal")


def xi_bracket(f: SPoly, g: SPoly) -> SPoly:
    """{xi, xi} = 1; the pbracket of this signature gives -1, so the sign is flipped."""
    return -pbracket(f, g)


def xi_double_mul(x: KKMElem, y: KKMElem) -> KKMElem:
    return kkm_mul(x, y, xi_bracket)


def xi_double_basis() -> List[KKMElem]:
    one = SPoly.const(XI_SIG)
    xi = SPoly.var(XI_SIG, "xi1")
    return kkm_basis([one, xi])


def xi_delta() -> LinearMap:
    """Even derivation of K(F + F xi): theta -> theta, xi -> -xi, 1 and xi*theta -> 0."""

    def rule(m: KKMElem):
        zero = SPoly.zero(XI_SIG)
        if m.a:
            mask = next(iter(m.a.terms))[1]
            return KKMElem(m.a.scale(-1) if mask else zero, zero)
        mask = next(iter(m.b.terms))[1]
        return KKMElem(zero, zero if mask else m.b)

    return LinearMap(0, rule, "delta")
