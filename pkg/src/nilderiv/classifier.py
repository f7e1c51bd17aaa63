"""Normal forms of nilpotent Lie algebras of derivations of rank at most three.

Every successful :func:`classify` returns witnesses (frame derivations and
the functions ``a``, ``b``), the coordinates of each input generator in the
frame, and an image inside the triangular algebra ``u_k``.  The image is
checked bracket by bracket before it is returned.

Constants are assumed to be rational: when the field of constants of the
input is strictly larger than Q the classifier reports
:class:`NonRationalConstants` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial, gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import ArithmeticError_, ClosednessError, MultiPoly, RatFunc, poly_gcd, potential
from .derivations import Derivation, apply, bracket
from .linalg import solve_in_span
from .lie import (LieBasis, NotNilpotentOperator, Subspace, _operator_on, bracket_preimage, center,
                  centralizer, ideal_RI_cap_L, is_abelian, jordan_chains, k_linear_reduce,
                  lower_central_series, quotient_chains, rank_over_R, structure_constants)

__all__ = [
    "ChainCoefficients",
    "ClassificationError",
    "InternalInconsistency",
    "NonRationalConstants",
    "NormalFormReport",
    "NotNilpotent",
    "RankTooHigh",
    "TAGS",
    "ZeroAlgebra",
    "classify",
    "classify_rank1",
    "classify_rank2",
    "classify_rank3",
    "embed_into_triangular",
    "express_via_chain",
    "express_via_grid",
    "is_in_triangular",
]

TAGS = ("Rank1", "Rank2Chain", "Abelian3", "Heisenberg3", "L1", "L2")

_MAX_DEPTH = 64


class ClassificationError(Exception):
    exit_code = 1


class NotNilpotent(ClassificationError):
    exit_code = 4


class RankTooHigh(ClassificationError):
    exit_code = 5


class NonRationalConstants(ClassificationError):
    exit_code = 6


class ZeroAlgebra(ClassificationError):
    pass


class InternalInconsistency(ClassificationError):
    """A verification step failed; this is a bug, not bad input."""


# -- coefficient recovery --------------------------------------------------

@dataclass(frozen=True)
class _Coordinate:
    value: RatFunc
    flow: Derivation  # acts as d/d(value) on the relevant functions


def _evaluate(h: MultiPoly, values: Sequence[RatFunc]) -> RatFunc:
    if all(v.is_polynomial() for v in values):
        return RatFunc.from_poly(h.compose([v.num for v in values]))
    return h.compose(values)


def _recover(c: RatFunc, coords: Sequence[_Coordinate], memo: Dict, depth: int = 0) -> MultiPoly:
    """Polynomial ``h`` over Q with ``c = h(coords)``.

    Differentiates along the flows, recovers the derivatives, integrates
    back and keeps the residual only if it is a rational number.
    """
    hit = memo.get(c)
    if hit is not None:
        return hit
    k = len(coords)
    if depth > _MAX_DEPTH:
        raise NonRationalConstants(f"{c} is not a polynomial in the witnesses")
    derivs = [apply(co.flow, c) for co in coords]
    if not any(derivs):
        if not c.is_constant():
            raise NonRationalConstants(f"{c} is constant along the frame but not rational")
        res = MultiPoly.constant(c.constant_value(), k)
    else:
        parts = [_recover(d, coords, memo, depth + 1) for d in derivs]
        if k == 1:
            h = parts[0].integrate(0)
        else:
            try:
                h = potential(parts[0], parts[1], 0, 1)
            except ClosednessError as exc:
                raise InternalInconsistency("frame flows do not commute on a coefficient") from exc
        resid = c - _evaluate(h, [co.value for co in coords])
        if not resid.is_constant():
            raise NonRationalConstants(f"{c} is not a polynomial in the witnesses over Q")
        res = h + resid.constant_value()
    memo[c] = res
    return res


@dataclass(frozen=True)
class ChainCoefficients:
    """Coordinates in the divided-power basis.

    ``coeffs[e]`` multiplies ``prod_i w_i**e_i / e_i!`` where ``w`` are the
    witnesses (``(a,)`` for a chain, ``(a, b)`` for a grid).
    """

    coeffs: Dict[Tuple[int, ...], Fraction]
    nwitnesses: int = 1

    @classmethod
    def from_poly(cls, h: MultiPoly) -> "ChainCoefficients":
        out = {}
        for e, v in h.terms.items():
            w = v
            for k in e:
                w *= factorial(k)
            out[e] = w
        return cls(out, h.nvars)

    def to_poly(self) -> MultiPoly:
        t = {}
        for e, v in self.coeffs.items():
            w = Fraction(v)
            for k in e:
                w /= factorial(k)
            t[e] = w
        return MultiPoly(self.nwitnesses, t)

    @property
    def gamma(self) -> Fraction:
        return self.coeffs.get((0,) * self.nwitnesses, Fraction(0))

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    @property
    def betas(self) -> Tuple[Fraction, ...]:
        """Coefficients of ``a^(i+1)/(i+1)!`` for a single witness."""
        if self.nwitnesses != 1:
            raise ValueError("betas are defined for a single witness")
        return tuple(self.coeffs.get((i + 1,), Fraction(0)) for i in range(self.degree))

    def reconstruct(self, *witnesses: RatFunc) -> RatFunc:
        if len(witnesses) != self.nwitnesses:
            raise ValueError("wrong number of witnesses")
        n = witnesses[0].nvars
        return self.to_poly().compose(list(witnesses)) if self.coeffs else RatFunc.zero(n)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def express_via_chain(b: RatFunc, a: RatFunc, D1: Derivation, D2: Derivation,
                      D3: Derivation, s: Optional[int] = None) -> ChainCoefficients:
    """Write ``b = gamma + sum_i beta_i a^(i+1)/(i+1)!`` with rational coefficients.

    ``s`` bounds the chain: ``D3(b)`` must lie in the span of
    ``1, a, ..., a^s/s!``.
    """
    _require(not apply(D1, a) and not apply(D2, a), "D1(a) and D2(a) must vanish")
    _require(apply(D3, a) == RatFunc.one(a.nvars), "D3(a) must be 1")
    _require(not apply(D1, b) and not apply(D2, b), "D1(b) and D2(b) must vanish")
    h = _recover(b, [_Coordinate(a, D3)], {})
    out = ChainCoefficients.from_poly(h)
    if s is not None and out.degree > s + 1:
        raise ValueError(f"D3(b) is not in the span of a^i/i!, i <= {s}")
    return out


def express_via_grid(c: RatFunc, a: RatFunc, b: RatFunc, D1: Derivation, D2: Derivation,
                     D3: Derivation, m: Optional[int] = None,
                     k: Optional[int] = None) -> ChainCoefficients:
    """Write ``c`` over the grid ``a^i b^j / (i! j!)``; keys of the result are ``(i, j)``."""
    n = c.nvars
    one = RatFunc.one(n)
    _require(not apply(D1, c), "D1(c) must vanish")
    _require(not apply(bracket(D2, D3), c), "[D2, D3](c) must vanish")
    _require(not apply(D2, a) and apply(D3, a) == one, "need D2(a) = 0 and D3(a) = 1")
    _require(apply(D2, b) == one and not apply(D3, b), "need D2(b) = 1 and D3(b) = 0")
    h = _recover(c, [_Coordinate(a, D3), _Coordinate(b, D2)], {})
    out = ChainCoefficients.from_poly(h)
    for i, j in out.coeffs:
        if (m is not None and i > m) or (k is not None and j > k):
            raise ValueError(f"c has a term a^{i} b^{j} outside the grid")
    return out


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class NormalFormReport:
    """Tag, witnesses and embedding of a classified algebra.

    ``coefficients[g]`` lists, for input generator ``g``, the coordinate of
    each frame derivation as a polynomial in the target variables;
    ``frame_images`` are the targets of ``D1, D2, ...`` in ``u_k``.
    """

    tag: str
    source: LieBasis
    rank: int
    n: Optional[int] = None
    m: Optional[int] = None
    D1: Optional[Derivation] = None
    D2: Optional[Derivation] = None
    D3: Optional[Derivation] = None
    a: Optional[RatFunc] = None
    b: Optional[RatFunc] = None
    frame_images: Tuple[Derivation, ...] = ()
    coefficients: Tuple[Tuple[MultiPoly, ...], ...] = ()
    embedded: Optional[LieBasis] = None
    verified: Dict[str, bool] = field(default_factory=dict)

    @property
    def frame(self) -> Tuple[Derivation, ...]:
        return tuple(d for d in (self.D1, self.D2, self.D3) if d is not None)[: self.rank]

    @property
    def label(self) -> str:
        if self.tag == "Rank2Chain":
            return f"Rank2Chain({self.n})"
        if self.tag == "L1":
            return f"L1({self.n})"
        if self.tag == "L2":
            return f"L2({self.n},{self.m})"
        return self.tag

    @property
    def correspondence(self) -> Tuple[Tuple[Derivation, Derivation], ...]:
        if self.embedded is None:
            return ()
        return tuple(zip(self.source.gens, self.embedded.gens))


def is_in_triangular(D: Derivation) -> bool:
    """Coefficient i is a polynomial in ``x_{i+1}..x_n``; the last one is constant."""
    for i, c in enumerate(D.coeffs):
        if not c.is_polynomial():
            return False
        if any(v <= i for v in c.num.variables()):
            return False
    return True


def _partials(k: int) -> Tuple[Derivation, ...]:
    return tuple(Derivation.partial(i, k) for i in range(k))


def _frame_relations(report: NormalFormReport) -> bool:
    frame = report.frame
    n = report.source.nvars
    zero, one = RatFunc.zero(n), RatFunc.one(n)
    if rank_over_R(list(frame)) != report.rank:
        return False
    tag = report.tag
    if tag == "Heisenberg3":
        D1, D2, D3 = frame
        return (bracket(D3, D2) == D1 and not bracket(D2, D1) and not bracket(D3, D1))
    if any(bracket(x, y) for i, x in enumerate(frame) for y in frame[i + 1:]):
        return False
    a, b = report.a, report.b
    if tag == "Rank2Chain" and a is not None:
        return apply(report.D1, a) == zero and apply(report.D2, a) == one
    if tag == "L1":
        return (a is not None and apply(report.D1, a) == zero and apply(report.D2, a) == zero
                and apply(report.D3, a) == one)
    if tag == "L2":
        ok = (b is not None and apply(report.D1, b) == zero and apply(report.D3, b) == zero
              and apply(report.D2, b) == one)
        if a is not None:
            ok = ok and (apply(report.D1, a) == zero and apply(report.D2, a) == zero
                         and apply(report.D3, a) == one)
        return ok
    return True


def _witness_values(report: NormalFormReport) -> List[RatFunc]:
    """Source-side values of the target variables ``x_1..x_k``."""
    n, k = report.source.nvars, len(report.frame_images)
    vals = [RatFunc.zero(n)] * k
    if report.tag == "Rank2Chain" and report.a is not None:
        vals[1] = report.a
    elif report.tag in ("L1", "L2"):
        if report.a is not None:
            vals[2] = report.a
        if report.tag == "L2":
            vals[1] = report.b
    return vals


def _containment(report: NormalFormReport) -> bool:
    """Every input generator equals its frame expansion."""
    vals = _witness_values(report)
    for g, cs in zip(report.source.gens, report.coefficients):
        total = Derivation.zero(report.source.nvars)
        for c, D in zip(cs, report.frame):
            if c:
                total = total + _evaluate(c, vals) * D
        if total != g:
            return False
    return True


def embed_into_triangular(report: NormalFormReport) -> LieBasis:
    """Image of the input basis in ``u_k``, verified before it is returned."""
    k = len(report.frame_images)
    images = []
    for cs in report.coefficients:
        total = Derivation.zero(k)
        for c, T in zip(cs, report.frame_images):
            if c:
                total = total + c * T
        images.append(total)
    if not all(is_in_triangular(e) for e in images):
        raise InternalInconsistency("embedded generator is not triangular")
    try:
        E = LieBasis(tuple(images), k)
    except ValueError as exc:
        raise InternalInconsistency("embedded generators are linearly dependent") from exc
    sc = structure_constants(report.source)
    for i in range(E.dim):
        for j in range(i + 1, E.dim):
            want = Derivation.zero(k)
            for t, v in enumerate(sc.c[i][j]):
                if v:
                    want = want + images[t] * v
            if bracket(images[i], images[j]) != want:
                raise InternalInconsistency(f"bracket of images {i + 1},{j + 1} does not match")
    if not _frame_relations(report):
        raise InternalInconsistency("witnesses violate the relations of their tag")
    if not _containment(report):
        raise InternalInconsistency("generator is not reproduced by its frame expansion")
    return E


def _finish(report: NormalFormReport) -> NormalFormReport:
    E = embed_into_triangular(report)
    flags = {"brackets": True, "triangular": True, "witnesses": True}
    return replace(report, embedded=E, verified=flags)


# -- helpers over R --------------------------------------------------------

def solve_over_R(X: Derivation, frame: Sequence[Derivation]) -> Tuple[RatFunc, ...]:
    """Rational functions ``c`` with ``X = sum c_i frame_i``; frame must be R-independent."""
    n, r = X.nvars, len(frame)
    rows = [[f.coeffs[j] for f in frame] + [X.coeffs[j]] for j in range(n)]
    piv_rows = []
    for col in range(r):
        p = next((i for i in range(len(rows)) if i not in piv_rows and rows[i][col]), None)
        if p is None:
            raise ValueError("frame is not independent over R")
        inv = rows[p][col].inverse()
        rows[p] = [v * inv for v in rows[p]]
        for i in range(len(rows)):
            if i != p and rows[i][col]:
                f = rows[i][col]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[p])]
        piv_rows.append(p)
    if any(rows[i][r] for i in range(len(rows)) if i not in piv_rows):
        raise ValueError("element is not in the R-span of the frame")
    return tuple(rows[p][r] for p in piv_rows)


def _ratio(X: Derivation, Y: Derivation) -> Optional[RatFunc]:
    """``r`` with ``X = r*Y``, or None."""
    i = next(i for i, c in enumerate(Y.coeffs) if c)
    r = X.coeffs[i] / Y.coeffs[i]
    return r if r * Y == X else None


def _first_outside(L: LieBasis, I: Subspace) -> Derivation:
    for i, g in enumerate(L.gens):
        if not I.contains(tuple(Fraction(int(j == i)) for j in range(L.dim))):
            return g
    raise InternalInconsistency("ideal is the whole algebra")


def _codim_one(L: LieBasis, I: Subspace, what: str) -> None:
    if L.dim - I.dim != 1:
        raise NonRationalConstants(f"{what} has codimension {L.dim - I.dim}, expected 1")


def _express(L: LieBasis, frame: Sequence[Derivation], coords: Sequence[_Coordinate],
             positions: Sequence[int], k: int) -> Tuple[Tuple[MultiPoly, ...], ...]:
    """Frame coordinates of every generator as polynomials in the target ring."""
    memo: Dict = {}
    out = []
    for g in L.gens:
        try:
            cs = solve_over_R(g, frame)
        except ValueError as exc:
            raise InternalInconsistency("generator outside the R-span of the frame") from exc
        polys = []
        for c in cs:
            if coords:
                h = _recover(c, coords, memo)
                polys.append(h.embed(k, positions))
            else:
                if not c.is_constant():
                    raise NonRationalConstants(f"coefficient {c} is not rational")
                polys.append(MultiPoly.constant(c.constant_value(), k))
        out.append(tuple(polys))
    return tuple(out)


def _identity_coefficients(L: LieBasis, k: int) -> Tuple[Tuple[MultiPoly, ...], ...]:
    return tuple(tuple(MultiPoly.constant(int(i == j), k) for j in range(k)) for i in range(L.dim))


# -- rank 1 and 2 ----------------------------------------------------------

def classify_rank1(L: LieBasis) -> NormalFormReport:
    if L.dim != 1:
        raise NonRationalConstants(f"rank 1 with dimension {L.dim}: constants exceed Q")
    rep = NormalFormReport(tag="Rank1", source=L, rank=1, D1=L.gens[0],
                           frame_images=_partials(1), coefficients=_identity_coefficients(L, 1))
    return _finish(rep)


def classify_rank2(L: LieBasis) -> NormalFormReport:
    if is_abelian(L, L.full()):
        if L.dim != 2:
            raise NonRationalConstants(f"abelian of rank 2 with dimension {L.dim}")
        rep = NormalFormReport(tag="Rank2Chain", source=L, rank=2, n=0, D1=L.gens[0],
                               D2=L.gens[1], frame_images=_partials(2),
                               coefficients=_identity_coefficients(L, 2))
        return _finish(rep)
    Z = center(L)
    if Z.dim != 1:
        raise NonRationalConstants(f"center of dimension {Z.dim} in a rank-2 algebra")
    I = ideal_RI_cap_L(L, Z)
    _codim_one(L, I, "R Z(L) cap L")
    D2 = _first_outside(L, I)
    chains = jordan_chains(L, I, D2)
    if len(chains) != 1 or len(chains[0]) < 2:
        raise NonRationalConstants("ad D2 on the ideal is not a single chain")
    chain = [L.element(v) for v in chains[0]]
    D1 = chain[-1]
    a = _ratio(chain[-2], D1)
    if a is None:
        raise InternalInconsistency("chain is not proportional over R")
    coeffs = _express(L, (D1, D2), [_Coordinate(a, D2)], [1], 2)
    n = max(c[0].degree() for c in coeffs)
    rep = NormalFormReport(tag="Rank2Chain", source=L, rank=2, n=n, D1=D1, D2=D2, a=a,
                           frame_images=_partials(2), coefficients=coeffs)
    return _finish(rep)


# -- rank 3 ----------------------------------------------------------------

def _dim3(L: LieBasis) -> NormalFormReport:
    sc = structure_constants(L)
    pair = next(((i, j) for i in range(3) for j in range(i + 1, 3) if any(sc.c[i][j])), None)
    if pair is None:
        return _finish(NormalFormReport(tag="Abelian3", source=L, rank=3, D1=L.gens[0],
                                        D2=L.gens[1], D3=L.gens[2], frame_images=_partials(3),
                                        coefficients=_identity_coefficients(L, 3)))
    i, j = pair
    D2, D3 = L.gens[i], L.gens[j]
    D1 = bracket(D3, D2)
    frame_vecs = [L.coords(D) for D in (D1, D2, D3)]
    if any(v is None for v in frame_vecs):
        raise InternalInconsistency("Heisenberg frame left the algebra")
    coeffs = []
    for t in range(3):
        e = tuple(Fraction(int(s == t)) for s in range(3))
        x = solve_in_span(frame_vecs, e)
        if x is None:
            raise InternalInconsistency("Heisenberg frame is not a basis")
        coeffs.append(tuple(MultiPoly.constant(v, 3) for v in x))
    x3 = MultiPoly.var(2, 3)
    targets = (Derivation.partial(0, 3),
               Derivation.from_polys([x3, MultiPoly.one(3), MultiPoly.zero(3)]),
               Derivation.partial(2, 3))
    return _finish(NormalFormReport(tag="Heisenberg3", source=L, rank=3, D1=D1, D2=D2, D3=D3,
                                    frame_images=targets, coefficients=tuple(coeffs)))


def _flat_sections(chain: Sequence[Derivation], a: RatFunc) -> List[Derivation]:
    """For each j (from the end up) the element ``sum_i (-a)^i/i! chain[j+i]``."""
    out = []
    for j in range(len(chain) - 1, -1, -1):
        w = Derivation.zero(chain[0].nvars)
        p = RatFunc.one(a.nvars)
        for i, v in enumerate(chain[j:]):
            if i:
                p = p * a * Fraction(-1, i)
            w = w + p * v
        out.append(w)
    return out


def _abelian_frame(L: LieBasis, I: Subspace, D3: Derivation):
    """Witnesses ``D1, D2, a`` for an abelian ideal of codimension one."""
    try:
        chains = [[L.element(v) for v in ch] for ch in jordan_chains(L, I, D3)]
    except NotNilpotentOperator as exc:
        raise NotNilpotent(str(exc)) from exc
    c0 = chains[0]
    D1 = c0[-1]
    a = None
    if len(c0) >= 2:
        a = _ratio(c0[-2], D1)
        if a is None:
            other = next((ch[-1] for ch in chains[1:] if rank_over_R([D1, ch[-1]]) == 2), None)
            if other is not None:
                a = solve_over_R(c0[-2], (D1, other))[0]
            elif len(c0) >= 3:
                a = solve_over_R(c0[-3], (D1, c0[-2]))[1]
    if a is None:
        raise NonRationalConstants("no witness a: chains are too short")
    n = a.nvars
    if apply(D3, a) != RatFunc.one(n) or any(apply(X, a) for X in I.elements(L)):
        raise NonRationalConstants("witness a is not a coordinate for D3")
    D2 = None
    for ch in chains:
        for w in _flat_sections(ch, a):
            if w and rank_over_R([D1, w]) == 2:
                D2 = w
                break
        if D2 is not None:
            break
    if D2 is None:
        raise NonRationalConstants("the ideal has R-rank 1")
    return D1, D2, a


def _l1_report(L: LieBasis, I: Subspace, D3: Derivation) -> NormalFormReport:
    D1, D2, a = _abelian_frame(L, I, D3)
    coeffs = _express(L, (D1, D2, D3), [_Coordinate(a, D3)], [2], 3)
    n = max(max(c[0].degree(), c[1].degree()) for c in coeffs)
    rep = NormalFormReport(tag="L1", source=L, rank=3, n=n, D1=D1, D2=D2, D3=D3, a=a,
                           frame_images=_partials(3), coefficients=coeffs)
    return _finish(rep)


def _pick(L: LieBasis, S: Subspace, sub: Subspace) -> Derivation:
    """Last input generator in ``S`` but not in ``sub``, else a complement vector."""
    for i in reversed(range(L.dim)):
        e = tuple(Fraction(int(j == i)) for j in range(L.dim))
        if S.contains(e) and not sub.contains(e):
            return L.gens[i]
    comp = S.complement_basis(sub)
    if not comp:
        raise InternalInconsistency("no element to pick")
    return L.element(comp[0])


def _center_rank1(L: LieBasis, Z: Subspace) -> NormalFormReport:
    I1 = ideal_RI_cap_L(L, Z)
    Q = bracket_preimage(L, I1)
    D2 = _normalize_d2(L, I1, Q, _pick(L, Q, I1))
    I2 = ideal_RI_cap_L(L, I1 + Subspace.span([L.coords(D2)], L.dim))
    _codim_one(L, I2, "the second ideal")
    D3 = _first_outside(L, I2)
    if is_abelian(L, I2):
        return _l1_report(L, I2, D3)
    C = centralizer(L, I1)
    if C.dim > I1.dim:
        D4 = _pick(L, C.intersect(Q), I1)
        I4 = ideal_RI_cap_L(L, I1 + Subspace.span([L.coords(D4)], L.dim))
        _codim_one(L, I4, "the centralizer ideal")
        if not is_abelian(L, I4):
            raise InternalInconsistency("centralizer ideal is not abelian")
        return _l1_report(L, I4, _first_outside(L, I4))
    return _l2_report(L, I1, I2, D2, D3)


def _univariate(p: MultiPoly) -> List[Fraction]:
    c = p.coeffs_in(0)
    return [c[k].constant_value() if k in c else Fraction(0) for k in range(p.degree() + 1)]


def _eval1(cs: Sequence[Fraction], t: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(cs):
        out = out * t + c
    return out


def _divisors(n: int, cap: int = 10 ** 12) -> Optional[List[int]]:
    n = abs(n)
    if n > cap:
        return None
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_root(g: MultiPoly) -> Optional[Fraction]:
    """Some rational root of a univariate polynomial, or None."""
    cs = _univariate(g)
    d = len(cs) - 1
    if d < 1:
        return None
    if not cs[0]:
        return Fraction(0)
    t = -cs[d - 1] / (d * cs[d])
    if not _eval1(cs, t):
        return t
    g = g.exact_div(poly_gcd(g, g.diff(0))) if g.diff(0) else g
    cs = _univariate(g)
    if len(cs) == 2:
        return -cs[0] / cs[1]
    scale = 1
    for c in cs:
        scale = scale * c.denominator // gcd(scale, c.denominator)
    ints = [int(c * scale) for c in cs]
    ps, qs = _divisors(ints[0]), _divisors(ints[-1])
    if ps is None or qs is None:
        return None
    for q in qs:
        for p in ps:
            for t in (Fraction(p, q), Fraction(-p, q)):
                if not _eval1(cs, t):
                    return t
    return None


def _min_order_shift(A: List[List[Fraction]], B: List[List[Fraction]]) -> Tuple[Fraction, int]:
    """Rational t minimizing the nilpotency order of ``A - t B``, with that order.

    Prefers t = 0 on ties.
    """
    dim = len(A)
    t = MultiPoly.var(0, 1)
    N = [[MultiPoly.constant(A[i][j], 1) - t * B[i][j] for j in range(dim)] for i in range(dim)]
    P = N
    for k in range(1, dim + 1):
        entries = [e for row in P for e in row if e]
        if not entries:
            return Fraction(0), k
        g = entries[0]
        for e in entries[1:]:
            g = poly_gcd(g, e)
            if g.is_constant():
                break
        if not g.is_constant():
            root = _rational_root(g)
            if root is not None:
                return root, k
        P = [[sum((P[i][j2] * N[j2][j] for j2 in range(dim)), MultiPoly.zero(1))
              for j in range(dim)] for i in range(dim)]
    return Fraction(0), dim + 1


def _normalize_d2(L: LieBasis, I1: Subspace, Q: Subspace, D2: Derivation) -> Derivation:
    """Move D2 inside Q/I1 towards the least nilpotency order of ad D2 on I1."""
    if not I1.dim:
        return D2
    line = Subspace.span([L.coords(D2)], L.dim)
    zero = [[Fraction(0)] * I1.dim for _ in range(I1.dim)]
    for e in Q.complement_basis(I1 + line):
        E = L.element(e)
        A, B = _operator_on(L, I1, D2), _operator_on(L, I1, E)
        t, k = _min_order_shift(A, [[-x for x in row] for row in B])
        if _min_order_shift(B, zero)[1] < k:
            D2 = E
        elif t:
            D2 = D2 + E * t
    return D2


def _normalize_d3(L: LieBasis, I1: Subspace, I2: Subspace, D3: Derivation) -> Derivation:
    """Shift D3 within its coset mod I2 so that ad D3 has the least nilpotency order on I1.

    Conjugating by elements of I2 absorbs every shift except the one along
    the top of the chain of ad D3 on I2/I1, so a single parameter remains.
    """
    qc = quotient_chains(L, I2, I1, D3)
    if not qc or not I1.dim:
        return D3
    T = L.element(qc[0][0])
    t, _ = _min_order_shift(_operator_on(L, I1, D3), _operator_on(L, I1, T))
    return D3 - T * t if t else D3


def _lincomb(vec: Sequence[Fraction], polys: Sequence[MultiPoly], k: int) -> MultiPoly:
    return sum((p.scale(c) for c, p in zip(vec, polys) if c), MultiPoly.zero(k))


def _third_coordinate(L: LieBasis, I1: Subspace, coeffs, k: int) -> Optional[MultiPoly]:
    """``phi`` in the target variables with every D1 coordinate in the span V of I1's.

    Replacing the hidden third coordinate z by ``z + phi(a, b)`` adds
    ``g phi_b + h phi_a`` to the D1 coordinate of ``f D1 + g D2 + h D3``.
    Returns None when no polynomial shift brings everything into V.
    """
    cols = [[c[j] for c in coeffs] for j in range(3)]
    V = [_lincomb(v, cols[0], k) for v in I1.basis]
    reps = [[_lincomb(r, col, k) for col in cols] for r in L.full().complement_basis(I1)]
    top = max((f.degree() for f, _, _ in reps if f), default=-1) + 1
    if top <= 0:
        return None
    mons = [MultiPoly.monomial((0, i, j)) for i in range(top + 1) for j in range(top + 1 - i)]
    unknowns = []  # one polynomial per rep block for every unknown
    for mu in mons:
        unknowns.append([g * mu.diff(1) + h * mu.diff(2) for _, g, h in reps])
    zero = MultiPoly.zero(k)
    for r in range(len(reps)):
        for v in V:
            unknowns.append([-v if q == r else zero for q in range(len(reps))])
    keys = sorted({e for col in unknowns for p in col for e, _ in p.iter_terms()}
                  | {e for f, _, _ in reps for e, _ in f.iter_terms()})
    index = {e: i for i, e in enumerate(keys)}

    def flat(blocks):
        out = [Fraction(0)] * (len(keys) * len(reps))
        for r, p in enumerate(blocks):
            for e, c in p.iter_terms():
                out[r * len(keys) + index[e]] = c
        return out

    x = solve_in_span([flat(col) for col in unknowns], flat([-f for f, _, _ in reps]))
    if x is None:
        return None
    return _lincomb(x[:len(mons)], mons, k)


def _l2_report(L: LieBasis, I1: Subspace, I2: Subspace, D2: Derivation,
               D3: Derivation) -> NormalFormReport:
    D3 = _normalize_d3(L, I1, I2, D3)
    line = lambda D: Subspace.span([L.coords(D)], L.dim)  # noqa: E731
    M3 = I1.intersect(centralizer(L, line(D3)))
    M2 = I1.intersect(centralizer(L, line(D2)))
    try:
        ch3 = [[L.element(v) for v in ch] for ch in jordan_chains(L, M3, D2)]
        ch2 = [[L.element(v) for v in ch] for ch in jordan_chains(L, M2, D3)]
    except NotNilpotentOperator as exc:
        raise NotNilpotent(str(exc)) from exc
    if not ch3 or len(ch3[0]) < 2:
        raise InternalInconsistency("no chain for b")
    D1 = ch3[0][-1]
    b = _ratio(ch3[0][-2], D1)
    if b is None:
        raise InternalInconsistency("b chain is not proportional over R")
    a = None
    if ch2 and len(ch2[0]) >= 2:
        a = _ratio(ch2[0][-2], ch2[0][-1])
    else:
        qc = quotient_chains(L, I2, I1, D3)
        if qc and len(qc[0]) >= 2:
            w, u = L.element(qc[0][-2]), L.element(qc[0][-1])
            q = solve_over_R(u, (D1, D2))[1]
            qw = solve_over_R(w, (D1, D2))[1]
            if not q.is_constant() or not q:
                raise NonRationalConstants("quotient chain has a non-rational step")
            a = qw / q
    r = _ratio(bracket(D3, D2), D1)
    if r is None:
        raise InternalInconsistency("[D3, D2] is not a multiple of D1")
    if r:
        if a is not None:
            h = _recover(r, [_Coordinate(a, D3), _Coordinate(b, D2)], {})
            D2 = D2 - _evaluate(h.integrate(0), [a, b]) * D1
        else:
            h = _recover(r, [_Coordinate(b, D2)], {})
            D3 = D3 + _evaluate(h.integrate(0), [b]) * D1
    if a is not None:
        coords, positions = [_Coordinate(a, D3), _Coordinate(b, D2)], [2, 1]
    else:
        coords, positions = [_Coordinate(b, D2)], [1]
    coeffs = _express(L, (D1, D2, D3), coords, positions, 3)
    phi = _third_coordinate(L, I1, coeffs, 3) if a is not None else None
    if phi:
        pb, pa = phi.diff(1), phi.diff(2)
        values = [RatFunc.zero(3), b, a]
        D2 = D2 - _evaluate(pb, values) * D1
        D3 = D3 - _evaluate(pa, values) * D1
        coeffs = tuple((c[0] + c[1] * pb + c[2] * pa, c[1], c[2]) for c in coeffs)
    n = max(c[1].degree_in(2) for c in coeffs)
    m = max(max(c[0].degree_in(2), c[0].degree_in(1)) for c in coeffs)
    rep = NormalFormReport(tag="L2", source=L, rank=3, n=n, m=m, D1=D1, D2=D2, D3=D3, a=a, b=b,
                           frame_images=_partials(3), coefficients=coeffs)
    return _finish(rep)


def classify_rank3(L: LieBasis) -> NormalFormReport:
    if L.dim == 3:
        return _dim3(L)
    Z = center(L)
    rz = rank_over_R(Z.elements(L))
    if rz == 3:
        raise InternalInconsistency("center of rank 3 in a non-abelian algebra of dimension >= 4")
    if rz == 2:
        if Z.dim != 2:
            raise NonRationalConstants(f"center of rank 2 with dimension {Z.dim}")
        I = ideal_RI_cap_L(L, Z)
        _codim_one(L, I, "R Z(L) cap L")
        return _l1_report(L, I, _first_outside(L, I))
    if Z.dim != 1:
        raise NonRationalConstants(f"center of rank 1 with dimension {Z.dim}")
    return _center_rank1(L, Z)


# -- dispatcher ------------------------------------------------------------

def classify(L) -> NormalFormReport:
    """Classify a nilpotent algebra of rank at most 3 and embed it into ``u_k``.

    Accepts a LieBasis or any sequence of derivations; duplicates and
    Q-linear dependencies are removed first.
    """
    gens = L.gens if isinstance(L, LieBasis) else list(L)
    if not gens:
        raise ZeroAlgebra("no generators")
    L = k_linear_reduce(gens)
    if L.dim == 0:
        raise ZeroAlgebra("generators span the zero algebra")
    structure_constants(L)  # raises NotClosed
    if not lower_central_series(L).nilpotent:
        raise NotNilpotent("lower central series stabilizes at a nonzero ideal")
    r = rank_over_R(L)
    if r > 3:
        raise RankTooHigh(f"rank over R is {r}")
    Z = center(L)
    if rank_over_R(Z.elements(L)) != Z.dim:
        raise NonRationalConstants("center has more rational dimensions than its rank")
    try:
        if r == 1:
            return classify_rank1(L)
        if r == 2:
            return classify_rank2(L)
        return classify_rank3(L)
    except ArithmeticError_ as exc:
        raise InternalInconsistency(str(exc)) from exc
