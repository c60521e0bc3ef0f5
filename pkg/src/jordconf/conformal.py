"""Lambda-calculus for finite conformal superalgebras over F[d].

Elements of F[lambda_1..lambda_5] (x) F[d] (x) R are stored as a single sparse
dict keyed by ``(e_1, .., e_5, d_power, basis_index)``.  Formal variables are
indices 0..4; ``LAM, MU, NU`` name the first three, the remaining ones serve as
scratch variables for composite subscripts (evaluate in a fresh variable, then
substitute).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .field import Scalar, canon, is_rational, parse_scalar, scalar_str

NVARS = 5
LAM, MU, NU = 0, 1, 2
VAR_NAMES = ("λ", "μ", "ν", "κ", "ρ")

Key = Tuple[int, ...]  # (e_0, .., e_4, d, idx)
ZERO_EXPS = (0,) * NVARS


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


class CAlgebra:
    """Free F[d]-module of finite rank with a lambda-product table on basis pairs.

    ``table[(i, j)]`` is a dict ``{(p, q, k): c}`` meaning sum c * lam^p d^q e_k.
    """

    def __init__(self, name: str, symbols: Sequence[str], parities: Sequence[int],
                 table: Optional[Mapping[Tuple[int, int], Mapping[Tuple[int, int, int], Scalar]]] = None,
                 variety: Optional[str] = None):
        if len(symbols) != len(parities):
            raise ValueError("one parity per basis symbol")
        self.name = name
        self.symbols = list(symbols)
        self.parities = [p & 1 for p in parities]
        self.variety = variety
        self.meta: Dict[str, object] = {}
        self.table: Dict[Tuple[int, int], Dict[Tuple[int, int, int], Scalar]] = {}
        self._expand: Dict[Tuple[int, int, int, int], Dict[Tuple[int, int, int], Scalar]] = {}
        for (i, j), entry in (table or {}).items():
            self.set_entry(i, j, entry)

    @property
    def rank(self) -> int:
        return len(self.symbols)

    def rank_split(self) -> Tuple[int, int]:
        odd = sum(self.parities)
        return self.rank - odd, odd

    def set_entry(self, i: int, j: int, entry) -> None:
        if isinstance(entry, FormalPoly):
            entry = table_entry_from(entry)
        clean = {}
        for (p, q, k), c in entry.items():
            if not 0 <= k < self.rank:
                raise ValueError(f"basis index {k} out of range")
            if c != 0:
                if self.parities[k] != self.parities[i] ^ self.parities[j]:
                    raise ValueError(
                        f"parity violation in {self.symbols[i]}_lam {self.symbols[j]}")
                clean[(p, q, k)] = canon(c)
        self.table[(i, j)] = clean
        self._expand.clear()

    def entry(self, i: int, j: int) -> Dict[Tuple[int, int, int], Scalar]:
        try:
            return self.table[(i, j)]
        except KeyError:
            raise KeyError(f"{self.name}: no table entry for ({self.symbols[i]}, {self.symbols[j]})")

    def is_complete(self) -> bool:
        return all((i, j) in self.table for i in range(self.rank) for j in range(self.rank))

    def expansion(self, d1: int, d2: int, i: int, j: int) -> Dict[Tuple[int, int, int], Scalar]:
        """(d^d1 e_i)_lam (d^d2 e_j) = (-lam)^d1 (lam + d)^d2 (e_i _lam e_j)."""
        key = (d1, d2, i, j)
        out = self._expand.get(key)
        if out is not None:
            return out
        base = self.entry(i, j)
        pre: Dict[Tuple[int, int], int] = {}
        for a in range(d2 + 1):
            pre[(d1 + a, d2 - a)] = _sign(d1) * comb(d2, a)
        out = {}
        for (p, q, k), c in base.items():
            for (pp, qq), s in pre.items():
                kk = (p + pp, q + qq, k)
                v = out.get(kk, 0) + s * c
                if v == 0:
                    out.pop(kk, None)
                else:
                    out[kk] = v
        self._expand[key] = out
        return out

    # element constructors -----------------------------------------------------
    def basis(self, i) -> "FormalPoly":
        if isinstance(i, str):
            i = self.symbols.index(i)
        return FormalPoly(self, {ZERO_EXPS + (0, i): 1})

    def elem(self, spec: Mapping) -> "FormalPoly":
        """Element from ``{basis: {d_power: coeff}}`` (basis by index or symbol)."""
        terms = {}
        for b, poly in spec.items():
            i = self.symbols.index(b) if isinstance(b, str) else b
            for q, c in poly.items():
                terms[ZERO_EXPS + (q, i)] = c
        return FormalPoly(self, terms)

    def zero(self) -> "FormalPoly":
        return FormalPoly(self)

    def __repr__(self):
        ev, od = self.rank_split()
        return f"CAlgebra({self.name}, rank ({ev}|{od}), variety={self.variety})"


class FormalPoly:
    """Polynomial in the formal variables with coefficients in the F[d]-module."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: CAlgebra, terms: Optional[Mapping[Key, Scalar]] = None):
        self.alg = alg
        self.terms: Dict[Key, Scalar] = {}
        if terms:
            for k, c in terms.items():
                if c != 0:
                    self.terms[k] = canon(c)

    @classmethod
    def _raw(cls, alg: CAlgebra, terms: Dict[Key, Scalar]) -> "FormalPoly":
        out = cls.__new__(cls)
        out.alg = alg
        out.terms = terms
        return out

    def _same(self, other: "FormalPoly") -> None:
        if not isinstance(other, FormalPoly):
            raise TypeError(f"expected FormalPoly, got {type(other).__name__}")
        if other.alg is not self.alg:
            raise ValueError(f"algebra mismatch: {self.alg.name} vs {other.alg.name}")

    def __add__(self, other: "FormalPoly") -> "FormalPoly":
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return FormalPoly._raw(self.alg, out)

    def __neg__(self) -> "FormalPoly":
        return FormalPoly._raw(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FormalPoly") -> "FormalPoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "FormalPoly":
        if c == 0:
            return FormalPoly(self.alg)
        if c == 1:
            return self
        return FormalPoly._raw(self.alg, {k: canon(v * c) for k, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def d(self, times: int = 1) -> "FormalPoly":
        """Apply the module derivation d."""
        return FormalPoly._raw(self.alg, {k[:NVARS] + (k[NVARS] + times, k[-1]): c
                                          for k, c in self.terms.items()})

    def times_var(self, var: int, power: int = 1) -> "FormalPoly":
        out = {}
        for k, c in self.terms.items():
            e = list(k)
            e[var] += power
            out[tuple(e)] = c
        return FormalPoly._raw(self.alg, out)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, FormalPoly):
            return self.alg is other.alg and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def variables(self) -> set:
        used = set()
        for k in self.terms:
            for v in range(NVARS):
                if k[v]:
                    used.add(v)
        return used

    def parity(self) -> Optional[int]:
        pars = {self.alg.parities[k[-1]] for k in self.terms}
        if not pars:
            return 0
        return pars.pop() if len(pars) == 1 else None

    def degree_in(self, var: int) -> int:
        return max((k[var] for k in self.terms), default=-1)

    def coefficient(self, var: int, power: int) -> "FormalPoly":
        """Coefficient of var^power (var removed)."""
        out = {}
        for k, c in self.terms.items():
            if k[var] == power:
                e = list(k)
                e[var] = 0
                out[tuple(e)] = c
        return FormalPoly._raw(self.alg, out)

    def module_vector(self) -> Dict[Tuple[int, int], Scalar]:
        """{(d_power, idx): c} for a lambda-free element."""
        out = {}
        for k, c in self.terms.items():
            if any(k[:NVARS]):
                raise ValueError("element still depends on formal variables")
            out[(k[NVARS], k[-1])] = c
        return out

    def __repr__(self):
        return f"FormalPoly({render(self)})"

    def __str__(self):
        return render(self)


CElem = FormalPoly


def table_entry_from(p: FormalPoly, var: int = LAM) -> Dict[Tuple[int, int, int], Scalar]:
    out = {}
    for k, c in p.terms.items():
        if any(k[v] for v in range(NVARS) if v != var):
            raise ValueError("table entries may only use one formal variable")
        out[(k[var], k[NVARS], k[-1])] = c
    return out


def entry_as_poly(alg: CAlgebra, entry: Mapping[Tuple[int, int, int], Scalar],
                  var: int = LAM) -> FormalPoly:
    terms = {}
    for (p, q, k), c in entry.items():
        e = [0] * NVARS
        e[var] = p
        terms[tuple(e) + (q, k)] = c
    return FormalPoly(alg, terms)


# products ------------------------------------------------------------------------

def lprod(x: FormalPoly, var: int, y: FormalPoly) -> FormalPoly:
    """x_var y extended by sesquilinearity and bilinearity over the formal scalars."""
    x._same(y)
    if var in x.variables() or var in y.variables():
        raise ValueError(f"variable {VAR_NAMES[var]} is already bound in an operand")
    alg = x.alg
    out: Dict[Key, Scalar] = {}
    for kx, cx in x.terms.items():
        ex, dx, i = kx[:NVARS], kx[NVARS], kx[-1]
        for ky, cy in y.terms.items():
            ey, dy, j = ky[:NVARS], ky[NVARS], ky[-1]
            exp = alg.expansion(dx, dy, i, j)
            if not exp:
                continue
            base = [a + b for a, b in zip(ex, ey)]
            cc = cx * cy
            for (p, q, k), c in exp.items():
                e = list(base)
                e[var] += p
                key = tuple(e) + (q, k)
                v = out.get(key, 0) + cc * c
                if v == 0:
                    out.pop(key, None)
                else:
                    out[key] = v
    return FormalPoly._raw(alg, out)


LinearForm = Tuple[Tuple[Scalar, ...], Scalar]  # (coefficients of the vars, coefficient of d)


def linear_form(vars: Optional[Mapping[int, Scalar]] = None, d: Scalar = 0) -> LinearForm:
    coeffs = [0] * NVARS
    for v, c in (vars or {}).items():
        coeffs[v] = c
    return tuple(coeffs), d


@lru_cache(maxsize=None)
def _form_power(form: LinearForm, e: int) -> Tuple[Tuple[Tuple[int, ...], Scalar], ...]:
    """Expansion of (sum c_v lam_v + c_d d)^e as ((exps..., d_power), coeff) pairs."""
    coeffs, cd = form
    slots = [(v, c) for v, c in enumerate(coeffs) if c != 0]
    if cd != 0:
        slots.append((NVARS, cd))
    cur: Dict[Tuple[int, ...], Scalar] = {(0,) * (NVARS + 1): 1}
    for _ in range(e):
        nxt: Dict[Tuple[int, ...], Scalar] = {}
        for k, c in cur.items():
            for v, cv in slots:
                kk = list(k)
                kk[v] += 1
                kk = tuple(kk)
                val = nxt.get(kk, 0) + c * cv
                if val == 0:
                    nxt.pop(kk, None)
                else:
                    nxt[kk] = val
        cur = nxt
    return tuple(cur.items())


def subst(p: FormalPoly, var: int, form: LinearForm) -> FormalPoly:
    """Replace the formal variable ``var`` by a linear form in the other variables and d.

    d in the form acts on the module coefficient.
    """
    if form[0][var] != 0:
        raise ValueError("substitution form must not contain the replaced variable")
    out: Dict[Key, Scalar] = {}
    for k, c in p.terms.items():
        e = k[var]
        if e == 0:
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
            continue
        base = list(k)
        base[var] = 0
        for delta, cf in _form_power(form, e):
            kk = tuple(base[i] + delta[i] for i in range(NVARS + 1)) + (k[-1],)
            v = out.get(kk, 0) + c * cf
            if v == 0:
                out.pop(kk, None)
            else:
                out[kk] = v
    return FormalPoly._raw(p.alg, out)


def subst_conjugate(p: FormalPoly, frm: int, to: int) -> FormalPoly:
    """Replace ``frm`` by (-to - d)."""
    if frm == to:
        raise ValueError("variable collision in conjugate substitution")
    return subst(p, frm, linear_form({to: -1}, -1))


def _fresh(*objs: FormalPoly, avoid: Iterable[int] = ()) -> int:
    used = set(avoid)
    for o in objs:
        used |= o.variables()
    for v in range(NVARS - 1, -1, -1):
        if v not in used:
            return v
    raise ValueError("no free formal variable left")


def prod_at(x: FormalPoly, y: FormalPoly, form: LinearForm) -> FormalPoly:
    """x_{form} y: evaluate in a fresh variable, then substitute the form."""
    avoid = [v for v, c in enumerate(form[0]) if c != 0]
    w = _fresh(x, y, avoid=avoid)
    return subst(lprod(x, w, y), w, form)


def _var(v: int) -> LinearForm:
    return linear_form({v: 1})


def jth_product(x: FormalPoly, y: FormalPoly, j: int) -> FormalPoly:
    """x_(j) y = j! * (coefficient of lam^j in x_lam y)."""
    if j < 0:
        raise ValueError("j must be non-negative")
    w = _fresh(x, y)
    return lprod(x, w, y).coefficient(w, j).scale(factorial(j))


# identity residuals ------------------------------------------------------------------

def _parity(x: FormalPoly) -> int:
    p = x.parity()
    if p is None:
        raise ValueError(f"non-homogeneous element {x}")
    return p


def comm_residual_conf(x: FormalPoly, y: FormalPoly, sign: int = 1) -> FormalPoly:
    """x_lam y - sign (-1)^{|x||y|} y_{-lam-d} x  (sign=+1 commutative, -1 anti)."""
    s = sign * _sign(_parity(x) * _parity(y))
    lhs = lprod(x, LAM, y)
    rhs = subst_conjugate(lprod(y, MU, x), MU, LAM)
    return lhs - rhs.scale(s)


def jacobi_residual(a: FormalPoly, b: FormalPoly, c: FormalPoly) -> FormalPoly:
    """a_lam(b_mu c) - (a_lam b)_{lam+mu} c - (-1)^{|a||b|} b_mu(a_lam c)."""
    s = _sign(_parity(a) * _parity(b))
    t1 = lprod(a, LAM, lprod(b, MU, c))
    t2 = prod_at(lprod(a, LAM, b), c, linear_form({LAM: 1, MU: 1}))
    t3 = lprod(b, MU, lprod(a, LAM, c))
    return t1 - t2 - t3.scale(s)


def assoc_residual(a: FormalPoly, b: FormalPoly, c: FormalPoly) -> FormalPoly:
    """a_lam(b_mu c) - (a_lam b)_{lam+mu} c."""
    t1 = lprod(a, LAM, lprod(b, MU, c))
    t2 = prod_at(lprod(a, LAM, b), c, linear_form({LAM: 1, MU: 1}))
    return t1 - t2


def conformal_jordan_residual(a: FormalPoly, b: FormalPoly, c: FormalPoly,
                              d: FormalPoly, shifted: bool = False) -> FormalPoly:
    """LHS - RHS of the lambda-form Jordan identity in lam, mu, nu.

    Each term is the lambda-form of one term of the linearized Jordan identity
    with lam attached to a, mu to b and nu to c:

        s_ac a_lam((b_mu c)_{mu+nu} d) + s_ab b_mu((c_nu a)_{lam+nu} d) + s_bc c_nu((a_lam b)_{lam+mu} d)
      = s_ac (a_lam b)_{lam+mu}(c_nu d) + s_ab (b_mu c)_{mu+nu}(a_lam d) + s_bc (c_nu a)_{lam+nu}(b_mu d)

    ``shifted=True`` evaluates the variant with subscripts nu-lam, -mu-d, nu-mu,
    lam+nu-mu; it is violated already by J_0 and is kept for comparison.
    """
    if shifted:
        return _shifted_jordan_residual(a, b, c, d)
    pa, pb, pc = _parity(a), _parity(b), _parity(c)
    _parity(d)
    s_ac, s_ab, s_bc = _sign(pa * pc), _sign(pa * pb), _sign(pb * pc)
    L, M, N = LAM, MU, NU
    lm = linear_form({L: 1, M: 1})
    mn = linear_form({M: 1, N: 1})
    ln = linear_form({L: 1, N: 1})
    ab, bc, ca = lprod(a, L, b), lprod(b, M, c), lprod(c, N, a)
    lhs = (lprod(a, L, prod_at(bc, d, mn)).scale(s_ac)
           + lprod(b, M, prod_at(ca, d, ln)).scale(s_ab)
           + lprod(c, N, prod_at(ab, d, lm)).scale(s_bc))
    rhs = (prod_at(ab, lprod(c, N, d), lm).scale(s_ac)
           + prod_at(bc, lprod(a, L, d), mn).scale(s_ab)
           + prod_at(ca, lprod(b, M, d), ln).scale(s_bc))
    return lhs - rhs


def _shifted_jordan_residual(a, b, c, d):
    pa, pb, pc = _parity(a), _parity(b), _parity(c)
    _parity(d)
    s_ac, s_ab, s_bc = _sign(pa * pc), _sign(pa * pb), _sign(pb * pc)
    L, M, N = LAM, MU, NU
    lam_plus_nu = linear_form({L: 1, N: 1})
    nu_minus_mu = linear_form({N: 1, M: -1})
    a_b_conj = prod_at(a, b, linear_form({M: -1}, -1))
    b_mu_c = lprod(b, M, c)
    lhs = (prod_at(a, prod_at(b_mu_c, d, _var(N)), _var(L)).scale(s_ac)
           + prod_at(b, prod_at(prod_at(c, a, linear_form({N: 1, L: -1})), d, lam_plus_nu),
                     _var(M)).scale(s_ab)
           + prod_at(c, prod_at(a_b_conj, d, lam_plus_nu), nu_minus_mu).scale(s_bc))
    rhs = (prod_at(a_b_conj, prod_at(c, d, nu_minus_mu), linear_form({L: 1, M: 1})).scale(s_ac)
           + prod_at(b_mu_c, prod_at(a, d, lam_plus_nu), _var(N)).scale(s_ab)
           + prod_at(prod_at(c, a, nu_minus_mu), lprod(b, M, d),
                     linear_form({L: 1, N: 1, M: -1})).scale(s_bc))
    return lhs - rhs


def sesquilinearity_residuals(x: FormalPoly, y: FormalPoly) -> Tuple[FormalPoly, FormalPoly]:
    """((dx)_lam y + lam x_lam y, x_lam(dy) - (lam + d) x_lam y)."""
    base = lprod(x, LAM, y)
    r1 = lprod(x.d(), LAM, y) + base.times_var(LAM)
    r2 = lprod(x, LAM, y.d()) - base.times_var(LAM) - base.d()
    return r1, r2


# current algebras --------------------------------------------------------------------

@dataclass
class FiniteAlgebra:
    """Finite-dimensional superalgebra by structure constants: mult[(i, j)] = {k: c}."""

    name: str
    symbols: List[str]
    parities: List[int]
    mult: Dict[Tuple[int, int], Dict[int, Scalar]] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.symbols)

    def basis(self, i: int) -> "FVec":
        return FVec(self, {i: 1})

    def mul(self, x: "FVec", y: "FVec") -> "FVec":
        out: Dict[int, Scalar] = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                for k, c in self.mult.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return FVec(self, out)

    def check_parities(self) -> None:
        for (i, j), row in self.mult.items():
            for k, c in row.items():
                if c != 0 and self.parities[k] != self.parities[i] ^ self.parities[j]:
                    raise ValueError(f"{self.name}: inconsistent parities in {i}*{j} -> {k}")


class FVec:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: FiniteAlgebra, coeffs: Mapping[int, Scalar]):
        self.alg = alg
        self.coeffs = {k: canon(v) for k, v in coeffs.items() if v != 0}

    def __add__(self, o):
        out = dict(self.coeffs)
        for k, v in o.coeffs.items():
            out[k] = out.get(k, 0) + v
        return FVec(self.alg, out)

    def __neg__(self):
        return FVec(self.alg, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        return FVec(self.alg, {k: v * c for k, v in self.coeffs.items()})

    def parity(self):
        pars = {self.alg.parities[k] for k in self.coeffs}
        if not pars:
            return 0
        return pars.pop() if len(pars) == 1 else None

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, o):
        if isinstance(o, FVec):
            return self.coeffs == o.coeffs
        return NotImplemented

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{scalar_str(v)}*{self.alg.symbols[k]}" for k, v in sorted(self.coeffs.items()))


def cur(base: FiniteAlgebra, variety: Optional[str] = None) -> CAlgebra:
    """Current conformal algebra: e_i _lam e_j = e_i e_j, constant in lam."""
    base.check_parities()
    table = {}
    for i in range(base.dim):
        for j in range(base.dim):
            row = base.mult.get((i, j), {})
            table[(i, j)] = {(0, 0, k): c for k, c in row.items() if c != 0}
    return CAlgebra(f"Cur({base.name})", base.symbols, base.parities, table, variety)


# rendering and catalog serialization -----------------------------------------------------

def _term_str(alg: CAlgebra, key: Key, c: Scalar, first: bool) -> str:
    factors = []
    for v in range(NVARS):
        e = key[v]
        if e:
            factors.append(VAR_NAMES[v] if e == 1 else f"{VAR_NAMES[v]}^{e}")
    q = key[NVARS]
    if q:
        factors.append("∂" if q == 1 else f"∂^{q}")
    factors.append(alg.symbols[key[-1]])
    neg = is_rational(c) and c < 0
    mag = -c if neg else c
    cs = scalar_str(mag)
    body = "*".join(([] if cs == "1" else [cs]) + factors)
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _render_key(key: Key):
    return (key[-1], key[NVARS], key[:NVARS])


def render(p: FormalPoly) -> str:
    if not p.terms:
        return "0"
    keys = sorted(p.terms, key=_render_key)
    return "".join(_term_str(p.alg, k, p.terms[k], i == 0) for i, k in enumerate(keys))


def render_entry(alg: CAlgebra, entry: Mapping[Tuple[int, int, int], Scalar]) -> str:
    return render(entry_as_poly(alg, entry))


def parse_entry(alg: CAlgebra, text: str) -> Dict[Tuple[int, int, int], Scalar]:
    """Inverse of :func:`render_entry` (only λ and ∂ may appear)."""
    text = text.strip()
    if text == "0":
        return {}
    # split on top-level " + " / " - " while keeping signs
    tokens = []
    buf = ""
    i = 0
    sign = 1
    if text.startswith("-"):
        sign = -1
        text = text[1:]
    while i < len(text):
        if text.startswith(" + ", i) or text.startswith(" - ", i):
            tokens.append((sign, buf))
            sign = 1 if text[i + 1] == "+" else -1
            buf = ""
            i += 3
            continue
        buf += text[i]
        i += 1
    tokens.append((sign, buf))
    out: Dict[Tuple[int, int, int], Scalar] = {}
    for sign, tok in tokens:
        factors = tok.split("*")
        coeff: Scalar = 1
        p = q = 0
        k = None
        for f in factors:
            name, _, power = f.partition("^")
            power_i = int(power) if power else 1
            if name == "λ":
                p = power_i
            elif name == "∂":
                q = power_i
            elif name in alg.symbols:
                k = alg.symbols.index(name)
            else:
                coeff = parse_scalar(f)
        if k is None:
            raise ValueError(f"term {tok!r} names no basis symbol")
        key = (p, q, k)
        out[key] = canon(out.get(key, 0) + sign * coeff)
    return {k: v for k, v in out.items() if v != 0}


def to_catalog(alg: CAlgebra) -> dict:
    """Structured catalog document for an algebra (JSON-ready)."""
    doc = {
        "name": alg.name,
        "rank": alg.rank,
        "symbols": list(alg.symbols),
        "parities": list(alg.parities),
        "variety": alg.variety,
        "table": [
            {"left": alg.symbols[i], "right": alg.symbols[j],
             "product": render_entry(alg, alg.table[(i, j)])}
            for i in range(alg.rank) for j in range(alg.rank) if (i, j) in alg.table
        ],
    }
    if "definitions" in alg.meta:
        doc["definitions"] = dict(alg.meta["definitions"])
    return doc


def from_catalog(doc: Mapping) -> CAlgebra:
    symbols = list(doc["symbols"])
    if doc.get("rank", len(symbols)) != len(symbols):
        raise ValueError("rank does not match the symbol list")
    alg = CAlgebra(doc["name"], symbols, doc["parities"], variety=doc.get("variety"))
    for row in doc["table"]:
        i, j = symbols.index(row["left"]), symbols.index(row["right"])
        alg.set_entry(i, j, parse_entry(alg, row["product"]))
    if "definitions" in doc:
        alg.meta["definitions"] = dict(doc["definitions"])
    return alg
