"""Exact linear algebra over Q (dense Fraction lists) and over Q[x] (Bareiss)."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .arith import MultiPoly

Vector = Tuple[Fraction, ...]


def rref(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; zero rows dropped."""
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0]) if rows else 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Basis of ``{x : A x = 0}``, one vector per free column, in column order."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Optional[Vector]:
    """Coefficients ``c`` with ``sum c_i basis_i = v``, or None."""
    if not basis:
        return () if not any(v) else None
    n = len(v)
    k = len(basis)
    # columns are basis vectors; augment with v
    rows = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    red, pivots = rref(rows, k + 1)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        x[p] = row[k]
    return tuple(x)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def mat_mul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


class SparseSolver:
    """Incremental reduced echelon form over sparse vectors.

    Each stored row remembers which combination of inserted vectors it is, so
    membership queries also return coordinates.
    """

    def __init__(self):
        self._rows: List[Tuple[Hashable, Dict, Dict[int, Fraction]]] = []
        self.count = 0

    @staticmethod
    def _axpy(y: Dict, a: Fraction, x: Dict) -> None:
        for k, v in x.items():
            s = y.get(k, 0) + a * v
            if s:
                y[k] = s
            else:
                y.pop(k, None)

    def _reduce(self, vec: Dict) -> Tuple[Dict, Dict[int, Fraction]]:
        res = dict(vec)
        comb: Dict[int, Fraction] = {}
        for piv, row, rcomb in self._rows:
            c = res.get(piv)
            if c:
                self._axpy(res, -c, row)
                self._axpy(comb, c, rcomb)
        return res, comb

    def add(self, vec: Dict) -> bool:
        """Insert a vector; True when it was independent of earlier ones."""
        idx = self.count
        self.count += 1
        res, comb = self._reduce(vec)
        if not res:
            return False
        # res = vec - sum comb*earlier
        rcomb = {k: -v for k, v in comb.items()}
        rcomb[idx] = Fraction(1)
        piv = min(res)
        inv = 1 / res[piv]
        res = {k: v * inv for k, v in res.items()}
        rcomb = {k: v * inv for k, v in rcomb.items()}
        for j, (p, row, c) in enumerate(self._rows):
            f = row.get(piv)
            if f:
                self._axpy(row, -f, res)
                self._axpy(c, -f, rcomb)
        self._rows.append((piv, res, rcomb))
        return True

    def coords(self, vec: Dict) -> Optional[Dict[int, Fraction]]:
        res, comb = self._reduce(vec)
        if res:
            return None
        return comb

    @property
    def rank(self) -> int:
        return len(self._rows)


def bareiss_rank(matrix: Sequence[Sequence[MultiPoly]]) -> int:
    """Rank of a polynomial matrix by fraction-free elimination."""
    m = [list(r) for r in matrix]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    nv = m[0][0].nvars if ncols else 0
    prev = MultiPoly.one(nv)
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            for j in range(c + 1, ncols):
                m[i][j] = (piv * m[i][j] - f * m[r][j]).exact_div(prev)
            m[i][c] = MultiPoly.zero(nv)
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def bareiss_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square polynomial matrix."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    nv = m[0][0].nvars
    prev = MultiPoly.one(nv)
    sign = 1
    for k in range(n - 1):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            return MultiPoly.zero(nv)
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d
