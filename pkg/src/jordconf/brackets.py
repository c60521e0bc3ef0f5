"""Poisson and generalized Poisson brackets on super-polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, List, Optional, Tuple

from .spoly import Signature, SPoly, euler, partial, popcount

Bracket = Callable[[SPoly, SPoly], SPoly]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BracketKind:
    tag: str
    sig: Signature

    def __post_init__(self):
        if self.tag == "pbracket" and self.sig.m % 2:
            raise ValueError("pbracket needs an even number of even variables")
        if self.tag == "kbracket" and not self.sig.m % 2:
            raise ValueError("kbracket needs an odd number of even variables")
        if self.tag not in ("pbracket", "kbracket"):
            raise ValueError(f"unknown bracket kind {self.tag!r}")

    @classmethod
    def for_signature(cls, sig: Signature) -> "BracketKind":
        return cls("kbracket" if sig.m % 2 else "pbracket", sig)


def _homogeneous_parity(f: SPoly) -> int:
    p = f.parity()
    if p is None:
        raise ValueError(f"non-homogeneous element {f}")
    return p


def _pq_part(f: SPoly, g: SPoly) -> SPoly:
    out = SPoly.zero(f.sig)
    for i in range(1, f.sig.k + 1):
        out = out + partial(f"p{i}", f) * partial(f"q{i}", g)
        out = out - partial(f"q{i}", f) * partial(f"p{i}", g)
    return out


def _odd_part(f: SPoly, g: SPoly) -> SPoly:
    # (-1)^{|f|} sum over the pairing, f homogeneous
    sig = f.sig
    out = SPoly.zero(sig)
    for i, j in sig.odd_pairs():
        out = out + partial(("odd", i), f) * partial(("odd", j), g)
    return -out if _homogeneous_parity(f) else out


def pbracket(f: SPoly, g: SPoly) -> SPoly:
    """Poisson bracket on the algebra with 2k even and n odd variables."""
    f._same(g)
    if f.sig.m % 2:
        raise ValueError("pbracket needs an even number of even variables")
    out = SPoly.zero(f.sig)
    for part in f.parts().values():
        out = out + _pq_part(part, g) + _odd_part(part, g)
    return out


def kbracket(f: SPoly, g: SPoly) -> SPoly:
    """Generalized Poisson (contact) bracket; requires the variable t."""
    f._same(g)
    sig = f.sig
    if not sig.m % 2:
        raise ValueError("kbracket needs an odd number of even variables")
    out = SPoly.zero(sig)
    two_minus_e_g = g.scale(2) - euler(g)
    dg = partial("t", g)
    for part in f.parts().values():
        two_minus_e_f = part.scale(2) - euler(part)
        out = out + two_minus_e_f * dg - partial("t", part) * two_minus_e_g
        out = out + _pq_part(part, g) + _odd_part(part, g)
    return out


def bracket(kind: BracketKind, f: SPoly, g: SPoly) -> SPoly:
    return kbracket(f, g) if kind.tag == "kbracket" else pbracket(f, g)


def bracket_derivation(f: SPoly, kind: BracketKind) -> SPoly:
    """D(f) = {f, 1}."""
    return bracket(kind, f, SPoly.const(f.sig))


def jordan_bracket_D(f: SPoly, g: SPoly, kind: BracketKind) -> SPoly:
    """{f,g}_D = {f,g} + (f D(g) - D(f) g) / 2."""
    out = bracket(kind, f, g)
    if kind.tag == "pbracket":
        return out
    return out + (f * bracket_derivation(g, kind) - bracket_derivation(f, kind) * g).scale(HALF)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def jordan_bracket_axiom_residuals(a: SPoly, b: SPoly, c: SPoly, br: Bracket,
                                   D: Callable[[SPoly], SPoly],
                                   plus_tail: bool = False) -> Tuple[SPoly, SPoly, SPoly]:
    """Residuals of the three Jordan-bracket axioms on a homogeneous triple.

    The third axiom is checked in the form

        {{a,b},c} + cyc = -({a,b}D(c) + (-1)^{|a||b|+|a||c|}{b,c}D(a)
                            + (-1)^{|a||c|+|b||c|}{c,a}D(b)).

    ``plus_tail=True`` flips the last two right-hand terms to ``+``; that
    variant is already violated by {f,g} = fg' - f'g on F[t].
    """
    pa, pb, pc = (_homogeneous_parity(x) for x in (a, b, c))
    r1 = br(a, b) + br(b, a).scale(_sign(pa * pb))
    r2 = br(a, b * c) - br(a, b) * c - (b * br(a, c)).scale(_sign(pa * pb)) + D(a) * b * c
    s_bca = _sign(pa * pb + pa * pc)
    s_cab = _sign(pa * pc + pb * pc)
    ab, bc, ca = br(a, b), br(b, c), br(c, a)
    lhs = br(ab, c) + br(bc, a).scale(s_bca) + br(ca, b).scale(s_cab)
    tail = (bc * D(a)).scale(s_bca) + (ca * D(b)).scale(s_cab)
    rhs = -(ab * D(c)) + (tail if plus_tail else -tail)
    return r1, r2, lhs - rhs


def antisymmetry_residual(f: SPoly, g: SPoly, br: Bracket) -> SPoly:
    pf, pg = _homogeneous_parity(f), _homogeneous_parity(g)
    return br(f, g) + br(g, f).scale(_sign(pf * pg))


def leibniz_residual(a: SPoly, b: SPoly, c: SPoly, br: Bracket,
                     D: Callable[[SPoly], SPoly]) -> SPoly:
    """{a,bc} - {a,b}c - (-1)^{|a||b|} b{a,c} + D(a)bc."""
    pa, pb = _homogeneous_parity(a), _homogeneous_parity(b)
    return br(a, b * c) - br(a, b) * c - (b * br(a, c)).scale(_sign(pa * pb)) + D(a) * b * c


def jacobi_residual(a: SPoly, b: SPoly, c: SPoly, br: Bracket) -> SPoly:
    """{a,{b,c}} - {{a,b},c} - (-1)^{|a||b|}{b,{a,c}}."""
    pa, pb = _homogeneous_parity(a), _homogeneous_parity(b)
    return br(a, br(b, c)) - br(br(a, b), c) - br(b, br(a, c)).scale(_sign(pa * pb))


def derivation_residual(d: Callable[[SPoly], SPoly], b: SPoly, c: SPoly) -> SPoly:
    """d(bc) - d(b)c - b d(c) for an even map d on the commutative product."""
    return d(b * c) - d(b) * c - b * d(c)


def monomials(sig: Signature, tmin: int = 0, tmax: int = 2, pq_max: int = 1,
              odd_max: Optional[int] = None) -> List[SPoly]:
    """Basis monomials with t-degree in [tmin, tmax], each p/q exponent <= pq_max
    and every odd mask (optionally capped in degree)."""
    ranges = [range(pq_max + 1)] * (2 * sig.k)
    if sig.has_t:
        ranges.append(range(tmin, tmax + 1))
    out = []
    for exps in product(*ranges):
        for mask in range(1 << sig.n):
            if odd_max is not None and popcount(mask) > odd_max:
                continue
            out.append(SPoly(sig, {(tuple(exps), mask): 1}))
    return out


def homogeneous_triples(elems: Iterable[SPoly]) -> Iterator[Tuple[SPoly, SPoly, SPoly]]:
    elems = list(elems)
    return product(elems, repeat=3)
