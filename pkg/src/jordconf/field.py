"""Exact scalars: rationals and the quartic extension Q[eps]/(eps^4 + 1/4).

Scalars flow through the rest of the package as ``int``, ``Fraction`` or
``FieldElem``.  ``FieldElem`` arithmetic always returns the rational value
when the irrational part cancels, so rational computations never pay for the
extension.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Rat = Fraction

# eps^4 = -1/4
_EPS4 = Fraction(-1, 4)


class FieldElem:
    """c0 + c1*eps + c2*eps^2 + c3*eps^3 with eps^4 = -1/4."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @staticmethod
    def make(c0, c1, c2, c3) -> "Scalar":
        if c1 == 0 and c2 == 0 and c3 == 0:
            return _canon_rat(c0)
        out = FieldElem.__new__(FieldElem)
        out.c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))
        return out

    @staticmethod
    def lift(x) -> "FieldElem":
        if isinstance(x, FieldElem):
            return x
        out = FieldElem.__new__(FieldElem)
        out.c = (Fraction(x), Fraction(0), Fraction(0), Fraction(0))
        return out

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, FieldElem):
            a, b = self.c, other.c
            return FieldElem.make(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
        if isinstance(other, Rational):
            a = self.c
            return FieldElem.make(a[0] + other, a[1], a[2], a[3])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return FieldElem.make(-a[0], -a[1], -a[2], -a[3])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                return 0
            a = self.c
            return FieldElem.make(a[0] * other, a[1] * other, a[2] * other, a[3] * other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        a, b = self.c, other.c
        prod = [Fraction(0)] * 7
        for i in range(4):
            if a[i] == 0:
                continue
            for j in range(4):
                if b[j]:
                    prod[i + j] += a[i] * b[j]
        return FieldElem.make(
            prod[0] + _EPS4 * prod[4],
            prod[1] + _EPS4 * prod[5],
            prod[2] + _EPS4 * prod[6],
            prod[3],
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        # Solve (mult-by-self) x = 1 by Gauss-Jordan on the 4x4 matrix.
        cols = []
        for k in range(4):
            basis = [0, 0, 0, 0]
            basis[k] = 1
            img = lift_scalar(self * FieldElem(*basis)).c
            cols.append(img)
        mat = [[cols[j][i] for j in range(4)] + [Fraction(int(i == 0))] for i in range(4)]
        for col in range(4):
            piv = next((r for r in range(col, 4) if mat[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("FieldElem is not invertible")
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [v / pv for v in mat[col]]
            for r in range(4):
                if r != col and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
        return FieldElem.make(*(mat[i][4] for i in range(4)))

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / other)
        if isinstance(other, FieldElem):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return inv(self) ** (-k)
        out: Scalar = 1
        base: Scalar = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.c == other.c
        if isinstance(other, Rational):
            return self.c[1] == 0 and self.c[2] == 0 and self.c[3] == 0 and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(("FieldElem", self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"FieldElem({', '.join(str(x) for x in self.c)})"

    def __str__(self):
        return scalar_str(self)


Scalar = Union[int, Fraction, FieldElem]

EPS = FieldElem.make(0, 1, 0, 0)
ALPHA = FieldElem.make(0, 0, 2, 0)  # 2*eps^2, squares to -1


def _canon_rat(x) -> Union[int, Fraction]:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def lift_scalar(x) -> FieldElem:
    return FieldElem.lift(x)


def inv(x: Scalar) -> Scalar:
    if isinstance(x, FieldElem):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("division by zero scalar")
    return _canon_rat(Fraction(1) / Fraction(x))


def canon(x) -> Scalar:
    """Canonical form of a scalar: ints stay ints, integral fractions become ints."""
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, int):
        return x
    return _canon_rat(x)


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, FieldElem)


def _rat_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_str(x: Scalar) -> str:
    """Render a scalar.  Irrational values use the bracketed form ``{c0;c1;c2;c3}``."""
    if isinstance(x, FieldElem):
        return "{" + ";".join(_rat_str(v) for v in x.c) + "}"
    return _rat_str(Fraction(x))


def parse_scalar(text: str) -> Scalar:
    text = text.strip()
    if text.startswith("{"):
        parts = text.strip("{}").split(";")
        if len(parts) != 4:
            raise ValueError(f"bad field element {text!r}")
        return FieldElem.make(*(Fraction(p) for p in parts))
    return canon(Fraction(text))


def is_unit(x: Scalar) -> bool:
    """True when x is invertible.

    eps^4 + 1/4 = (eps^2 + eps + 1/2)(eps^2 - eps + 1/2), so the scalar ring is
    a product of two copies of Q(i) and has zero divisors such as eps^2 + eps + 1/2.
    """
    if isinstance(x, FieldElem):
        a, b = components(x)
        return a != (0, 0) and b != (0, 0)
    return x != 0


# the two projections onto Q(i): eps -> (1 + i)/2 and eps -> (-1 + i)/2
def _gauss_mul(p, q):
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


_ROOTS = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(1, 2)))


def _powers(root):
    out = [(Fraction(1), Fraction(0))]
    for _ in range(3):
        out.append(_gauss_mul(out[-1], root))
    return out


_POW = [_powers(r) for r in _ROOTS]


def components(x: Scalar):
    """Images (re, im) of x in the two Q(i) factors."""
    c = lift_scalar(x).c
    out = []
    for pw in _POW:
        re = sum(ci * p[0] for ci, p in zip(c, pw))
        im = sum(ci * p[1] for ci, p in zip(c, pw))
        out.append((re, im))
    return tuple(out)


def _crt_matrix():
    rows = []
    for pw in _POW:
        rows.append([p[0] for p in pw])
        rows.append([p[1] for p in pw])
    n = 4
    A = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


_CRT = _crt_matrix()


def from_components(first, second) -> Scalar:
    vals = [first[0], first[1], second[0], second[1]]
    c = [sum(_CRT[i][j] * vals[j] for j in range(4)) for i in range(4)]
    return FieldElem.make(*c)


def _rat_sqrt(q: Fraction):
    from math import isqrt
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


def _gauss_sqrt(z):
    a, b = z
    if a == 0 and b == 0:
        return (Fraction(0), Fraction(0))
    r = _rat_sqrt(a * a + b * b)
    if r is None:
        return None
    x = _rat_sqrt((a + r) / 2)
    if x is not None and x != 0:
        return (x, b / (2 * x))
    y = _rat_sqrt((r - a) / 2)
    if y is None or y == 0:
        return None
    return (b / (2 * y), y)


def square_roots(x: Scalar):
    """All square roots of x that lie in the scalar ring (up to four)."""
    roots = []
    comps = components(x)
    per = []
    for z in comps:
        w = _gauss_sqrt(z)
        if w is None:
            return []
        opts = [w] if w == (0, 0) else [w, (-w[0], -w[1])]
        per.append(opts)
    for w1 in per[0]:
        for w2 in per[1]:
            roots.append(canon(from_components(w1, w2)))
    # simplest first: fewest nonzero eps-coefficients, then a positive leading one
    def key(r):
        c = lift_scalar(r).c
        nz = [v for v in c if v != 0]
        return (len(nz), nz[0] < 0 if nz else False, [abs(v) for v in c])
    return sorted(roots, key=key)
