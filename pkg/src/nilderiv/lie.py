"""Finite-dimensional Lie algebras of derivations over Q.

Elements of a :class:`LieBasis` are handled through their coordinate vectors
over Q.  Deciding membership in the Q-span works on the monomial expansion of
the coefficients over one common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import MultiPoly, RatFunc
from .derivations import Derivation, DimensionError, apply, bracket
from .linalg import (SparseSolver, Vector, bareiss_det, bareiss_rank, mat_mul, mat_vec,
                     nullspace, rref, solve_in_span)

__all__ = [
    "CentralSeries",
    "LieBasis",
    "LieStructureError",
    "NotClosed",
    "NotAnIdeal",
    "NotNilpotentOperator",
    "StructureTensor",
    "Subspace",
    "center",
    "centralizer",
    "ideal_RI_cap_L",
    "is_ideal",
    "jordan_chains",
    "quotient_chains",
    "k_linear_reduce",
    "lower_central_series",
    "rank_over_R",
    "structure_constants",
    "verify_rational_constants",
]


class LieStructureError(ValueError):
    pass


class NotClosed(LieStructureError):
    def __init__(self, i: int, j: int, value: Derivation):
        super().__init__(f"[g{i + 1}, g{j + 1}] = {value} is not in the span")
        self.pair = (i, j)
        self.value = value


class NotAnIdeal(LieStructureError):
    pass


class NotNilpotentOperator(LieStructureError):
    pass


def _lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    from .arith import poly_gcd
    if a.is_constant():
        return b
    if b.is_constant():
        return a
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def _common_denominator(ds: Sequence[Derivation], nvars: int) -> MultiPoly:
    q = MultiPoly.one(nvars)
    for d in ds:
        for c in d.coeffs:
            if not c.den.is_constant():
                q = _lcm(q, c.den)
    return q


def _expand(D: Derivation, q: MultiPoly) -> Optional[Dict]:
    """Monomial expansion of ``q * D``; None when ``q * D`` is not polynomial."""
    out = {}
    for i, c in enumerate(D.coeffs):
        if not c:
            continue
        if c.den.is_constant():
            p = c.num * q
        else:
            try:
                p = c.num * q.exact_div(c.den)
            except ValueError:
                return None
        for e, v in p.terms.items():
            out[(i, e)] = v
    return out


def _solver_for(ds: Sequence[Derivation], q: MultiPoly) -> Tuple[SparseSolver, List[bool]]:
    s = SparseSolver()
    flags = [s.add(_expand(d, q)) for d in ds]
    return s, flags


@dataclass(frozen=True)
class LieBasis:
    """A Q-linearly independent list of derivations spanning a Lie algebra.

    Closure is not required at construction; :func:`structure_constants`
    checks it.
    """

    gens: Tuple[Derivation, ...]
    nvars: int

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        if any(g.nvars != self.nvars for g in self.gens):
            raise DimensionError("generators do not share the number of variables")
        if not all(self._flags):
            raise LieStructureError("generators are linearly dependent over Q")

    @classmethod
    def of(cls, gens: Sequence[Derivation]) -> "LieBasis":
        gens = tuple(gens)
        if not gens:
            raise LieStructureError("need at least one generator to infer nvars")
        return cls(gens, gens[0].nvars)

    @cached_property
    def _denominator(self) -> MultiPoly:
        return _common_denominator(self.gens, self.nvars)

    @cached_property
    def _solver_flags(self):
        return _solver_for(self.gens, self._denominator)

    @property
    def _flags(self) -> List[bool]:
        return self._solver_flags[1]

    @property
    def dim(self) -> int:
        return len(self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def coords(self, D: Derivation) -> Optional[Vector]:
        """Coordinates of ``D`` over Q, or None when ``D`` is outside the span."""
        if D.nvars != self.nvars:
            raise DimensionError(f"dimension mismatch: {self.nvars} vs {D.nvars}")
        vec = _expand(D, self._denominator)
        if vec is None:
            return None
        comb = self._solver_flags[0].coords(vec)
        if comb is None:
            return None
        return tuple(comb.get(k, Fraction(0)) for k in range(self.dim))

    def element(self, coords: Sequence[Fraction]) -> Derivation:
        acc = Derivation.zero(self.nvars)
        for c, g in zip(coords, self.gens):
            if c:
                acc = acc + g * c
        return acc

    @cached_property
    def structure(self) -> "StructureTensor":
        return _compute_structure(self)

    def full(self) -> "Subspace":
        return Subspace.span([_unit(i, self.dim) for i in range(self.dim)], self.dim)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


def _unit(i: int, n: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def k_linear_reduce(vs: Sequence[Derivation], nvars: Optional[int] = None) -> LieBasis:
    """Maximal Q-independent sublist, keeping input order."""
    vs = list(vs)
    if not vs:
        if nvars is None:
            raise LieStructureError("cannot infer nvars from an empty list")
        return LieBasis((), nvars)
    n = vs[0].nvars
    if any(v.nvars != n for v in vs):
        raise DimensionError("derivations do not share the number of variables")
    q = _common_denominator(vs, n)
    _, flags = _solver_for(vs, q)
    return LieBasis(tuple(v for v, f in zip(vs, flags) if f), n)


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureTensor:
    """``[g_i, g_j] = sum_k c[i][j][k] g_k``."""

    c: Tuple[Tuple[Vector, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.c)

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        n = self.dim
        out = [Fraction(0)] * n
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                f = ui * vj
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] += f * ck
        return tuple(out)

    def ad(self, u: Sequence[Fraction]) -> List[List[Fraction]]:
        """Matrix of ``ad u``; column j is ``[u, g_j]``."""
        cols = [self.bracket(u, _unit(j, self.dim)) for j in range(self.dim)]
        return [list(r) for r in zip(*cols)] if cols else []

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(self.c[i][j][k] == -self.c[j][i][k]
                   for i in range(n) for j in range(n) for k in range(n))

    def satisfies_jacobi(self) -> bool:
        n = self.dim
        e = [_unit(i, n) for i in range(n)]
        for i, j, k in combinations(range(n), 3):
            s = [a + b + c for a, b, c in zip(
                self.bracket(self.bracket(e[i], e[j]), e[k]),
                self.bracket(self.bracket(e[j], e[k]), e[i]),
                self.bracket(self.bracket(e[k], e[i]), e[j]))]
            if any(s):
                return False
        return True


def structure_constants(L: LieBasis) -> StructureTensor:
    """Exact structure tensor; raises :class:`NotClosed` with the offending pair."""
    return L.structure


def _compute_structure(L: LieBasis) -> StructureTensor:
    n = L.dim
    zero = tuple(Fraction(0) for _ in range(n))
    c = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            b = bracket(L.gens[i], L.gens[j])
            v = L.coords(b)
            if v is None:
                raise NotClosed(i, j, b)
            c[i][j] = v
            c[j][i] = tuple(-x for x in v)
    return StructureTensor(tuple(tuple(r) for r in c))


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of an ambient Q^d, stored as a reduced echelon basis."""

    basis: Tuple[Vector, ...]
    ambient: int

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Fraction]], ambient: int) -> "Subspace":
        vectors = [v for v in vectors if any(v)]
        if not vectors:
            return cls((), ambient)
        red, _ = rref(vectors, ambient)
        return cls(tuple(tuple(r) for r in red), ambient)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls((), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return solve_in_span(self.basis, v) is not None

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def coords(self, v: Sequence[Fraction]) -> Optional[Vector]:
        return solve_in_span(self.basis, v)

    def elements(self, L: LieBasis) -> List[Derivation]:
        return [L.element(v) for v in self.basis]

    def intersect(self, other: "Subspace") -> "Subspace":
        k = self.dim
        if not k or not other.dim:
            return Subspace.zero(self.ambient)
        # sum x_i a_i - sum y_j b_j = 0
        cols = list(self.basis) + [tuple(-v for v in b) for b in other.basis]
        rows = [[c[i] for c in cols] for i in range(self.ambient)]
        sols = nullspace(rows, len(cols))
        vecs = [_combine(self.basis, s[:k]) for s in sols]
        return Subspace.span(vecs, self.ambient)

    def complement_basis(self, sub: "Subspace") -> List[Vector]:
        """Basis vectors of self (in order) extending ``sub`` to all of self."""
        acc = list(sub.basis)
        out = []
        for v in self.basis:
            if solve_in_span(acc, v) is None:
                acc.append(v)
                out.append(v)
        return out


# ---------------------------------------------------------------------------
# series, center, ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralSeries:
    terms: Tuple[Subspace, ...]
    nilpotent: bool
    nilpotency_class: Optional[int]

    @property
    def dims(self) -> List[int]:
        return [t.dim for t in self.terms]


def _bracket_space(sc: StructureTensor, A: Subspace, B: Subspace) -> Subspace:
    return Subspace.span([sc.bracket(a, b) for a in A.basis for b in B.basis], sc.dim)


def lower_central_series(L: LieBasis) -> CentralSeries:
    """``L ⊇ [L,L] ⊇ [L,[L,L]] ⊇ ...`` until it stabilizes."""
    sc = structure_constants(L)
    full = L.full()
    terms = [full]
    while terms[-1].dim:
        nxt = _bracket_space(sc, full, terms[-1])
        if nxt.dim == terms[-1].dim:
            return CentralSeries(tuple(terms), False, None)
        terms.append(nxt)
    return CentralSeries(tuple(terms), True, len(terms) - 1)


def derived_algebra(L: LieBasis) -> Subspace:
    sc = structure_constants(L)
    return _bracket_space(sc, L.full(), L.full())


def centralizer(L: LieBasis, S: Subspace) -> Subspace:
    """``{u in L : [u, s] = 0 for s in S}``."""
    sc = structure_constants(L)
    d = L.dim
    rows = []
    for s in S.basis:
        # [u, s] = sum_i u_i [g_i, s]
        cols = [sc.bracket(_unit(i, d), s) for i in range(d)]
        rows.extend([list(r) for r in zip(*cols)])
    return Subspace.span(nullspace(rows, d), d)


def center(L: LieBasis) -> Subspace:
    return centralizer(L, L.full())


def bracket_preimage(L: LieBasis, S: Subspace) -> Subspace:
    """``{u in L : [u, L] ⊆ S}``: the preimage of the center of ``L/S``."""
    sc = structure_constants(L)
    d = L.dim
    # project onto a complement of S: u lies in the preimage iff every
    # [u, g_j] has zero component outside S
    ann = nullspace([list(v) for v in S.basis], d) if S.dim else [_unit(i, d) for i in range(d)]
    rows = []
    for j in range(d):
        cols = [sc.bracket(_unit(i, d), _unit(j, d)) for i in range(d)]
        for a in ann:
            rows.append([sum((x * y for x, y in zip(a, col)), Fraction(0)) for col in cols])
    return Subspace.span(nullspace(rows, d), d)


def is_ideal(L: LieBasis, S: Subspace) -> bool:
    sc = structure_constants(L)
    return all(S.contains(sc.bracket(_unit(i, L.dim), s))
               for s in S.basis for i in range(L.dim))


def is_abelian(L: LieBasis, S: Subspace) -> bool:
    sc = structure_constants(L)
    return not any(any(sc.bracket(a, b)) for a in S.basis for b in S.basis)


# ---------------------------------------------------------------------------
# rank over the rational function field
# ---------------------------------------------------------------------------

def _cleared_row(D: Derivation) -> List[MultiPoly]:
    q = _common_denominator([D], D.nvars)
    return [c.num * q.exact_div(c.den) if c else MultiPoly.zero(D.nvars) for c in D.coeffs]


def rank_over_R(L) -> int:
    """Dimension of the R-span: rank of the coefficient matrix over Q(x)."""
    gens = L.gens if isinstance(L, LieBasis) else list(L)
    if not gens:
        return 0
    return bareiss_rank([_cleared_row(g) for g in gens])


def _r_independent_subset(ds: Sequence[Derivation]) -> List[Derivation]:
    chosen: List[Derivation] = []
    for d in ds:
        if rank_over_R(chosen + [d]) > len(chosen):
            chosen.append(d)
    return chosen


def ideal_RI_cap_L(L: LieBasis, I: Subspace) -> Subspace:
    """The Q-subspace of L lying in the R-span of ``I``.

    A vector ``u`` is in the result iff every ``(rk I + 1)``-minor of the
    matrix formed by an R-basis of ``I`` and ``sum_k u_k g_k`` vanishes;
    the minors are linear in ``u`` and give Q-linear conditions.
    """
    if not is_ideal(L, I):
        raise NotAnIdeal("subspace is not an ideal of L")
    d, n = L.dim, L.nvars
    B = _r_independent_subset(I.elements(L))
    r = len(B)
    if r == 0:
        return Subspace.zero(d)
    if r >= n:
        return L.full()
    brows = [_cleared_row(b) for b in B]
    q = L._denominator
    # one common multiplier for all generators keeps the minors linear in u
    grows = [[c.num * q.exact_div(c.den) if c else MultiPoly.zero(n) for c in g.coeffs]
             for g in L.gens]
    equations: List[List[Fraction]] = []
    for cols in combinations(range(n), r + 1):
        cof = []
        for pos, c in enumerate(cols):
            rest = [cc for cc in cols if cc != c]
            minor = bareiss_det([[row[cc] for cc in rest] for row in brows]) if r else MultiPoly.one(n)
            cof.append(minor if (r + pos) % 2 == 0 else -minor)
        per_gen = []
        for g in grows:
            acc = MultiPoly.zero(n)
            for cf, c in zip(cof, cols):
                if cf and g[c]:
                    acc = acc + cf * g[c]
            per_gen.append(acc)
        monos = sorted({e for p in per_gen for e in p.terms})
        for e in monos:
            equations.append([p.terms.get(e, Fraction(0)) for p in per_gen])
    result = Subspace.span(nullspace(equations, d), d)
    if not (I <= result and is_ideal(L, result)):
        raise LieStructureError("R-closure of an ideal failed its ideal check")
    return result


# ---------------------------------------------------------------------------
# Jordan chains
# ---------------------------------------------------------------------------

def _operator_on(L: LieBasis, V: Subspace, D) -> List[List[Fraction]]:
    """Matrix of ``ad D`` restricted to V in V's basis; column j is the image of basis j."""
    if isinstance(D, Derivation):
        images = []
        for v in V.elements(L):
            w = L.coords(bracket(D, v))
            if w is None:
                raise LieStructureError("ad D does not map V into L")
            images.append(w)
    else:
        sc = structure_constants(L)
        images = [sc.bracket(D, v) for v in V.basis]
    cols = []
    for w in images:
        x = V.coords(w)
        if x is None:
            raise LieStructureError("ad D does not map V into V")
        cols.append(x)
    m = V.dim
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def _chains_of_matrix(N: List[List[Fraction]]) -> List[List[Vector]]:
    m = len(N)

    def apply_n(v, k=1):
        for _ in range(k):
            v = mat_vec(N, v)
        return v

    kernels = [Subspace.zero(m)]
    P = [[Fraction(int(a == b)) for b in range(m)] for a in range(m)]
    while kernels[-1].dim < m:
        P = mat_mul(N, P)
        k = Subspace.span(nullspace(P, m), m)
        if k.dim == kernels[-1].dim:
            raise NotNilpotentOperator("ad D is not nilpotent on V")
        kernels.append(k)
    p = len(kernels) - 1
    heads: List[Tuple[Vector, int]] = []
    for j in range(p, 0, -1):
        avoid = list(kernels[j - 1].basis)
        avoid += [apply_n(h, length - j) for h, length in heads if length > j]
        for x in kernels[j].basis:
            if solve_in_span(avoid, x) is None:
                heads.append((x, j))
                avoid.append(x)
    chains = []
    for h, length in heads:
        chain = [h]
        for _ in range(length - 1):
            chain.append(apply_n(chain[-1]))
        chains.append(chain)
    return chains


def jordan_chains(L: LieBasis, V: Subspace, D) -> List[List[Vector]]:
    """Partition a basis of V into chains ``v, (ad D)v, ..., (ad D)^(l-1) v``.

    ``D`` is a Derivation or a coordinate vector in L.  Chains come out
    longest first; heads are taken from the echelon basis of each kernel,
    lowest pivot first.  Returned vectors are coordinates in L.
    """
    if V.dim == 0:
        return []
    N = _operator_on(L, V, D)
    return [[_combine(V.basis, v) for v in chain] for chain in _chains_of_matrix(N)]


def quotient_chains(L: LieBasis, V: Subspace, W: Subspace, D) -> List[List[Vector]]:
    """Jordan chains of ``ad D`` on ``V/W``, as representatives in L.

    Representatives are combinations of a fixed complement of W in V, so
    ``(ad D)`` of a chain member equals the next member only modulo W.
    """
    comp = V.complement_basis(W)
    if not comp:
        return []
    sc = structure_constants(L)
    full = list(W.basis) + comp
    cols = []
    for c in comp:
        img = sc.bracket(D, c) if not isinstance(D, Derivation) else L.coords(bracket(D, L.element(c)))
        x = solve_in_span(full, img) if img is not None else None
        if x is None:
            raise LieStructureError("ad D does not map V into V")
        cols.append(x[W.dim:])
    m = len(comp)
    N = [[cols[j][i] for j in range(m)] for i in range(m)]
    return [[_combine(comp, v) for v in chain] for chain in _chains_of_matrix(N)]


def _combine(basis: Sequence[Sequence[Fraction]], coeffs: Sequence[Fraction]) -> Vector:
    out = [Fraction(0)] * (len(basis[0]) if basis else 0)
    for c, b in zip(coeffs, basis):
        if c:
            for i, x in enumerate(b):
                out[i] += c * x
    return tuple(out)


def verify_rational_constants(L: LieBasis, r) -> bool:
    """True iff ``r`` is killed by every generator and is a rational number."""
    if isinstance(r, MultiPoly):
        r = RatFunc.from_poly(r)
    return r.is_constant() and all(not apply(g, r) for g in L.gens)
