"""Exact linear algebra over the scalar field on sparse vectors.

Vectors are dicts from hashable coordinates to scalars.  Everything is exact;
pivots are chosen by a fixed coordinate order so results are deterministic.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .field import Scalar, canon, inv, is_unit

Vec = Dict[Hashable, Scalar]


def vadd(u: Mapping, v: Mapping, c: Scalar = 1) -> Vec:
    """u + c*v."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y == 0:
            out.pop(k, None)
        else:
            out[k] = canon(y)
    return out


def vscale(v: Mapping, c: Scalar) -> Vec:
    if c == 0:
        return {}
    return {k: canon(x * c) for k, x in v.items()}


class Echelon:
    """Incremental reduced row echelon form that remembers how each row was built.

    ``add`` returns True when the vector is independent of the rows so far.
    ``express`` writes a vector as a combination of the added vectors (by label).
    """

    def __init__(self, key=None):
        self.key = key or (lambda k: k)
        self.rows: Dict[Hashable, Tuple[Vec, Vec]] = {}  # pivot -> (row, combination)
        self.labels: List[Hashable] = []

    def __len__(self):
        return len(self.rows)

    def _pivot(self, v: Vec) -> Hashable:
        # the scalar ring has zero divisors; only invertible entries may be pivots
        units = [k for k, x in v.items() if is_unit(x)]
        if not units:
            raise ZeroDivisionError("no invertible pivot available")
        return min(units, key=self.key)

    def reduce(self, v: Mapping) -> Tuple[Vec, Vec]:
        """Return (remainder, combination) with v = remainder + sum comb[l] * vec_l."""
        rem = dict(v)
        comb: Vec = {}
        changed = True
        while changed and rem:
            changed = False
            for p in sorted((k for k in rem if k in self.rows), key=self.key):
                c = rem.get(p, 0)
                if c == 0:
                    continue
                row, rc = self.rows[p]
                rem = vadd(rem, row, -c)
                comb = vadd(comb, rc, c)
                changed = True
        return rem, comb

    def add(self, v: Mapping, label: Hashable = None) -> bool:
        label = len(self.labels) if label is None else label
        rem, comb = self.reduce(v)
        if not rem:
            return False
        self.labels.append(label)
        comb = vadd({label: 1}, comb, -1)
        p = self._pivot(rem)
        c = inv(rem[p])
        rem, comb = vscale(rem, c), vscale(comb, c)
        # keep the form reduced: clear the new pivot from older rows
        for q, (row, rc) in list(self.rows.items()):
            x = row.get(p, 0)
            if x:
                self.rows[q] = (vadd(row, rem, -x), vadd(rc, comb, -x))
        self.rows[p] = (rem, comb)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)[0]

    def express(self, v: Mapping) -> Optional[Vec]:
        rem, comb = self.reduce(v)
        if rem:
            return None
        return comb


def rank(vectors: Sequence[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def nullspace(columns: Sequence[Mapping]) -> List[Vec]:
    """Basis of {x : sum x_i columns[i] = 0}, as dicts index -> scalar."""
    e = Echelon()
    out = []
    for i, col in enumerate(columns):
        rem, comb = e.reduce(col)
        if rem:
            e.add(col, label=i)
        else:
            out.append(vadd({i: 1}, comb, -1))
    return out


def solve(equations: Sequence[Tuple[Mapping, Scalar]]) -> Optional[Tuple[Vec, List[Vec]]]:
    """Solve sum_k eq[k] x_k = rhs for each (eq, rhs).

    Returns (particular solution, nullspace basis) or None if inconsistent.
    Unknown names are the keys used in the equation dicts.
    """
    const = ("__rhs__",)
    rows: Dict[Hashable, Vec] = {}
    order = {}

    def key(k):
        if k == const:
            return (1,)
        if k not in order:
            order[k] = len(order)
        return (0, order[k])

    for eq, _ in equations:
        for k in eq:
            key(k)
    for eq, rhs in equations:
        v = dict(eq)
        if rhs:
            v[const] = -rhs
        for p in sorted((k for k in v if k in rows), key=key):
            c = v.get(p, 0)
            if c:
                v = vadd(v, rows[p], -c)
        v = {k: x for k, x in v.items() if x != 0}
        if not v:
            continue
        if set(v) == {const}:
            return None
        units = [k for k, x in v.items() if k != const and is_unit(x)]
        if not units:
            raise ZeroDivisionError("no invertible pivot available")
        p = min(units, key=key)
        v = vscale(v, inv(v[p]))
        for q in list(rows):
            x = rows[q].get(p, 0)
            if x:
                rows[q] = vadd(rows[q], v, -x)
        rows[p] = v
    unknowns = sorted(order, key=key)
    free = [k for k in unknowns if k not in rows]
    particular = {}
    for p, row in rows.items():
        c = -row.get(const, 0)
        if c:
            particular[p] = canon(c)
    basis = []
    for f in free:
        vec = {f: 1}
        for p, row in rows.items():
            x = row.get(f, 0)
            if x:
                vec[p] = canon(-x)
        basis.append(vec)
    return particular, basis
