"""Super-polynomials: Grassmann variables over a (Laurent) polynomial ring.

An :class:`SPoly` is a finite sum of terms ``c * x^e * xi_A`` where ``x^e`` is
a monomial in the even variables (p_1..p_k, q_1..q_k and possibly t) and
``xi_A`` is the ordered product of the odd variables listed in the bitmask A.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .field import Scalar, canon, is_rational, scalar_str

Key = Tuple[Tuple[int, ...], int]


@dataclass(frozen=True)
class Signature:
    """Shape of the ambient superalgebra: m even and n odd variables.

    ``even_kind`` is ``"laurent"`` (m = 1, the single variable t with integer
    exponents) or ``"polynomial"``.  ``odd_pairing`` selects the quadratic form
    used by the brackets: ``"hyperbolic"`` pairs xi_{n-1} with xi_n and is diagonal
    elsewhere, ``"diagonal"`` pairs every xi_i with itself.
    """

    m: int
    n: int
    even_kind: str = "polynomial"
    odd_pairing: str = "hyperbolic"
    odd_symbol: str = "xi"

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("variable counts must be non-negative")
        if self.even_kind not in ("laurent", "polynomial"):
            raise ValueError(f"unknown even kind {self.even_kind!r}")
        if self.even_kind == "laurent" and self.m != 1:
            raise ValueError("laurent signatures have exactly one even variable t")
        if self.odd_pairing not in ("hyperbolic", "diagonal"):
            raise ValueError(f"unknown odd pairing {self.odd_pairing!r}")

    @classmethod
    def laurent(cls, n: int, odd_pairing: str = "hyperbolic") -> "Signature":
        return cls(1, n, "laurent", odd_pairing)

    @property
    def k(self) -> int:
        return self.m // 2

    @property
    def has_t(self) -> bool:
        return self.m % 2 == 1

    @property
    def t_index(self) -> int:
        if not self.has_t:
            raise ValueError("signature has no variable t")
        return self.m - 1

    @property
    def even_names(self) -> List[str]:
        names = [f"p{i}" for i in range(1, self.k + 1)]
        names += [f"q{i}" for i in range(1, self.k + 1)]
        if self.has_t:
            names.append("t")
        return names

    def odd_pairs(self) -> List[Tuple[int, int]]:
        """0-based index pairs (i, j) of the form sum d_i f * d_j g."""
        n = self.n
        if self.odd_pairing == "hyperbolic" and n >= 2:
            pairs = [(i, i) for i in range(n - 2)]
            return pairs + [(n - 2, n - 1), (n - 1, n - 2)]
        return [(i, i) for i in range(n)]

    def resolve(self, var) -> Tuple[str, int]:
        """Map a variable id (``"t"``, ``"p2"``, ``"xi3"``) to ``("even"|"odd", index)``."""
        if isinstance(var, tuple):
            kind, idx = var
            return kind, idx
        names = self.even_names
        if var in names:
            return "even", names.index(var)
        for prefix in (self.odd_symbol, "xi", "omega"):
            if var.startswith(prefix) and var[len(prefix):].isdigit():
                i = int(var[len(prefix):])
                if 1 <= i <= self.n:
                    return "odd", i - 1
        raise KeyError(f"unknown variable {var!r} for signature {self}")


@lru_cache(maxsize=None)
def koszul_sign(a: int, b: int) -> int:
    """Sign of xi_A * xi_B after sorting, 0 when the masks overlap."""
    if a & b:
        return 0
    count = 0
    j = 0
    bb = b
    while bb:
        if bb & 1:
            count += bin(a >> (j + 1)).count("1")
        bb >>= 1
        j += 1
    return -1 if count & 1 else 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class SPoly:
    __slots__ = ("sig", "terms")

    def __init__(self, sig: Signature, terms: Optional[Dict[Key, Scalar]] = None):
        self.sig = sig
        self.terms: Dict[Key, Scalar] = {}
        if terms:
            for key, c in terms.items():
                if c != 0:
                    self._check_key(key)
                    self.terms[key] = canon(c)

    def _check_key(self, key: Key) -> None:
        exps, mask = key
        if len(exps) != self.sig.m or mask >> self.sig.n:
            raise ValueError(f"term {key} does not fit signature {self.sig}")
        if self.sig.even_kind == "polynomial" and any(e < 0 for e in exps):
            raise ValueError("negative exponent in a polynomial signature")

    # constructors -------------------------------------------------------------
    @classmethod
    def zero(cls, sig: Signature) -> "SPoly":
        return cls(sig)

    @classmethod
    def const(cls, sig: Signature, c: Scalar = 1) -> "SPoly":
        return cls(sig, {((0,) * sig.m, 0): c})

    @classmethod
    def monomial(cls, sig: Signature, exps: Iterable[int] = (), odd: Iterable[int] = (),
                 c: Scalar = 1) -> "SPoly":
        """Monomial ``c * x^exps * xi_{odd[0]} xi_{odd[1]} ...`` (odd indices 1-based, any order)."""
        exps = tuple(exps) or (0,) * sig.m
        out = cls.const(sig, c)
        for i in odd:
            out = out * cls(sig, {((0,) * sig.m, 1 << (i - 1)): 1})
        return cls(sig, {(exps, key[1]): v for key, v in out.terms.items()})

    @classmethod
    def var(cls, sig: Signature, name: str) -> "SPoly":
        kind, idx = sig.resolve(name)
        if kind == "odd":
            return cls(sig, {((0,) * sig.m, 1 << idx): 1})
        exps = [0] * sig.m
        exps[idx] = 1
        return cls(sig, {(tuple(exps), 0): 1})

    # structure ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def parity(self) -> Optional[int]:
        """Parity of a homogeneous element; 0 for zero, None when mixed."""
        pars = {popcount(mask) & 1 for (_, mask) in self.terms}
        if not pars:
            return 0
        return pars.pop() if len(pars) == 1 else None

    def parts(self) -> Dict[int, "SPoly"]:
        """Split into homogeneous components keyed by parity."""
        out: Dict[int, Dict[Key, Scalar]] = {0: {}, 1: {}}
        for key, c in self.terms.items():
            out[popcount(key[1]) & 1][key] = c
        return {p: SPoly(self.sig, d) for p, d in out.items() if d}

    def items(self) -> Iterator[Tuple[Key, Scalar]]:
        return iter(self.terms.items())

    def copy(self) -> "SPoly":
        return SPoly(self.sig, dict(self.terms))

    # arithmetic -----------------------------------------------------------------
    def _same(self, other: "SPoly") -> None:
        if not isinstance(other, SPoly):
            raise TypeError(f"expected SPoly, got {type(other).__name__}")
        if other.sig != self.sig:
            raise ValueError(f"signature mismatch: {self.sig} vs {other.sig}")

    def __add__(self, other: "SPoly") -> "SPoly":
        self._same(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, 0) + c
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        res = SPoly(self.sig)
        res.terms = out
        return res

    def __neg__(self) -> "SPoly":
        res = SPoly(self.sig)
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other: "SPoly") -> "SPoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "SPoly":
        if c == 0:
            return SPoly(self.sig)
        res = SPoly(self.sig)
        res.terms = {k: canon(v * c) for k, v in self.terms.items()}
        return res

    def __mul__(self, other):
        if isinstance(other, SPoly):
            return smul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, SPoly):
            return self.sig == other.sig and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"SPoly({render(self)})"

    def __str__(self):
        return render(self)


def smul(f: SPoly, g: SPoly) -> SPoly:
    """Product in the supercommutative algebra, with Koszul signs on the odd part."""
    f._same(g)
    out: Dict[Key, Scalar] = {}
    for (ea, ma), ca in f.terms.items():
        for (eb, mb), cb in g.terms.items():
            s = koszul_sign(ma, mb)
            if not s:
                continue
            key = (tuple(x + y for x, y in zip(ea, eb)), ma | mb)
            v = out.get(key, 0) + (ca * cb if s > 0 else -(ca * cb))
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
    res = SPoly(f.sig)
    res.terms = out
    return res


def partial(var, f: SPoly) -> SPoly:
    """Left partial derivative with respect to an even or odd variable."""
    kind, idx = f.sig.resolve(var)
    out: Dict[Key, Scalar] = {}
    if kind == "even":
        for (exps, mask), c in f.terms.items():
            e = exps[idx]
            if e == 0:
                continue
            new = list(exps)
            new[idx] = e - 1
            out[(tuple(new), mask)] = c * e
    else:
        bit = 1 << idx
        below = bit - 1
        for (exps, mask), c in f.terms.items():
            if not mask & bit:
                continue
            sign = -1 if popcount(mask & below) & 1 else 1
            out[(exps, mask ^ bit)] = c * sign
    res = SPoly(f.sig)
    res.terms = {k: canon(v) for k, v in out.items()}
    return res


def euler(f: SPoly) -> SPoly:
    """Degree in p, q and xi (t excluded) times each monomial."""
    sig = f.sig
    npq = 2 * sig.k
    out: Dict[Key, Scalar] = {}
    for (exps, mask), c in f.terms.items():
        deg = sum(exps[:npq]) + popcount(mask)
        if deg:
            out[(exps, mask)] = c * deg
    res = SPoly(sig)
    res.terms = out
    return res


def _monomial_str(sig: Signature, exps: Tuple[int, ...], mask: int) -> str:
    factors = []
    for name, e in zip(sig.even_names, exps):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    i = 1
    while mask:
        if mask & 1:
            factors.append(f"{sig.odd_symbol}{i}")
        mask >>= 1
        i += 1
    return "*".join(factors)


def _term_order(key: Key):
    exps, mask = key
    return (popcount(mask), mask, exps)


def render(f: SPoly) -> str:
    """Canonical text: terms sorted by odd degree, mask, exponents; explicit signs."""
    if not f.terms:
        return "0"
    pieces = []
    for key in sorted(f.terms, key=_term_order):
        c = f.terms[key]
        mono = _monomial_str(f.sig, *key)
        neg = is_rational(c) and c < 0
        mag = -c if neg else c
        cs = scalar_str(mag)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        pieces.append(("- " if neg else "+ ") + body)
    text = " ".join(pieces)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]
