"""Exact arithmetic over Q: sparse multivariate polynomials and rational functions.

Variables are indexed from 0.  Polynomials are immutable maps from exponent
tuples to nonzero :class:`fractions.Fraction` coefficients.  The global
monomial order is graded lexicographic with ``x0 > x1 > ...``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

Exps = Tuple[int, ...]

__all__ = [
    "ArithmeticError_",
    "ClosednessError",
    "MultiPoly",
    "RatFunc",
    "formal_integrate",
    "monomial_key",
    "partial_derivative",
    "poly_gcd",
    "potential",
    "rat_normalize",
]


class ArithmeticError_(ValueError):
    """Bad input to an exact-arithmetic operation."""


class ClosednessError(ArithmeticError_):
    """The pair handed to :func:`potential` is not closed."""


def monomial_key(e: Exps) -> Tuple[int, Exps]:
    """Sort key for graded lex; larger key means larger monomial."""
    return (sum(e), e)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exps, object]] = None):
        self.nvars = nvars
        clean: Dict[Exps, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ArithmeticError_(
                        f"exponent {e} has length {len(e)}, expected {nvars}")
                c = _as_fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exps, Fraction]) -> "MultiPoly":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        c = _as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.constant(1, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ArithmeticError_(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, e: Iterable[int], c=1) -> "MultiPoly":
        e = tuple(e)
        return cls(len(e), {e: c})

    # -- basic queries ----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ArithmeticError_("polynomial is not constant")
        return next(iter(self.terms.values()))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(sorted(used))

    def leading_exps(self) -> Exps:
        if not self.terms:
            raise ArithmeticError_("zero polynomial has no leading term")
        return max(self.terms, key=monomial_key)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_exps()]

    def sorted_terms(self) -> list:
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- equality / hashing -----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.to_str()!r})"

    def to_str(self, names: Optional[Iterable[str]] = None) -> str:
        """Canonical text: graded-lex order, '/' fractions, parseable."""
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        out = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            factors = []
            for i, p in enumerate(e):
                if p == 1:
                    factors.append(names[i])
                elif p > 1:
                    factors.append(f"{names[i]}^{p}")
            if a != 1 or not factors:
                cs = str(a.numerator) if a.denominator == 1 else f"({a.numerator}/{a.denominator})"
                factors.insert(0, cs)
            body = "*".join(factors)
            if k == 0:
                out.append(body if sign == "+" else "-" + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    __str__ = to_str

    # -- ring operations --------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ArithmeticError_(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            if s is None:
                t[e] = c
            else:
                s += c
                if s:
                    t[e] = s
                else:
                    del t[e]
        return MultiPoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _as_fraction(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.nvars)
        t: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                t[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ArithmeticError_("negative power of a polynomial")
        result = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coeff())

    # -- calculus ---------------------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise ArithmeticError_(f"variable index {i} out of range for {self.nvars} variables")
        t = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                t[ne] = c * k
        return MultiPoly._raw(self.nvars, t)

    def integrate(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise ArithmeticError_(f"variable index {i} out of range for {self.nvars} variables")
        t = {}
        for e, c in self.terms.items():
            k = e[i] + 1
            t[e[:i] + (k,) + e[i + 1:]] = c / k
        return MultiPoly._raw(self.nvars, t)

    # -- substitution -----------------------------------------------------
    def compose(self, images) -> "MultiPoly | RatFunc":
        """Substitute ``x_i -> images[i]`` (MultiPoly or RatFunc values)."""
        if len(images) != self.nvars:
            raise ArithmeticError_("wrong number of substitution images")
        if not images:
            return self
        rational = any(isinstance(im, RatFunc) for im in images)
        target_n = images[0].nvars
        zero = RatFunc.zero(target_n) if rational else MultiPoly.zero(target_n)
        one = RatFunc.one(target_n) if rational else MultiPoly.one(target_n)
        powers: Dict[Tuple[int, int], object] = {}

        def pw(i: int, k: int):
            key = (i, k)
            if key not in powers:
                powers[key] = one if k == 0 else pw(i, k - 1) * images[i]
            return powers[key]

        result = zero
        for e, c in self.terms.items():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            result = result + term * c
        return result

    def embed(self, nvars: int, positions: Iterable[int]) -> "MultiPoly":
        """Rename variable j to ``positions[j]`` inside a ring of ``nvars`` variables."""
        positions = list(positions)
        t = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for j, k in enumerate(e):
                ne[positions[j]] += k
            t[tuple(ne)] = c
        return MultiPoly._raw(nvars, t)

    # -- division ---------------------------------------------------------
    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient ``self / other``; raises if the division is not exact."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        lt = other.leading_exps()
        lc = other.terms[lt]
        rem = dict(self.terms)
        q: Dict[Exps, Fraction] = {}
        while rem:
            e = max(rem, key=monomial_key)
            if any(a < b for a, b in zip(e, lt)):
                raise ArithmeticError_("polynomial division is not exact")
            qe = tuple(a - b for a, b in zip(e, lt))
            qc = rem[e] / lc
            q[qe] = qc
            for oe, oc in other.terms.items():
                te = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(te, 0) - qc * oc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return MultiPoly._raw(self.nvars, q)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
        except ArithmeticError_:
            return False
        return True

    # -- univariate views -------------------------------------------------
    def coeffs_in(self, i: int) -> Dict[int, "MultiPoly"]:
        """Coefficients of powers of ``x_i`` (each free of ``x_i``)."""
        groups: Dict[int, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            groups.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly._raw(self.nvars, t) for k, t in groups.items()}

    def iter_terms(self) -> Iterator[Tuple[Exps, Fraction]]:
        return iter(self.terms.items())


# ---------------------------------------------------------------------------
# gcd: recursive primitive PRS
# ---------------------------------------------------------------------------

def _shift(p: MultiPoly, i: int, k: int) -> MultiPoly:
    if k == 0:
        return p
    return MultiPoly._raw(
        p.nvars, {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in p.terms.items()})


def _lead_in(p: MultiPoly, i: int) -> MultiPoly:
    return p.coeffs_in(i)[p.degree_in(i)]


def _prem(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    """lc(b)^(da-db+1) * a  reduced modulo b, viewed in x_i."""
    db = b.degree_in(i)
    lcb = _lead_in(b, i)
    steps = a.degree_in(i) - db + 1
    while a and a.degree_in(i) >= db:
        da = a.degree_in(i)
        a = lcb * a - _shift(_lead_in(a, i) * b, i, da - db)
        steps -= 1
    if steps > 0 and a:
        a = a * lcb ** steps
    return a


def _content(p: MultiPoly, i: int) -> MultiPoly:
    g = None
    for c in sorted(p.coeffs_in(i).values(), key=lambda q: len(q.terms)):
        g = c if g is None else _gcd(g, c)
        if g.is_constant():
            return MultiPoly.one(p.nvars)
    return g.monic()


def _monomial_gcd(m: MultiPoly, p: MultiPoly) -> MultiPoly:
    (e,) = m.terms
    low = list(e)
    for pe in p.terms:
        low = [min(a, b) for a, b in zip(low, pe)]
    return MultiPoly._raw(m.nvars, {tuple(low): Fraction(1)})


def _gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if not p:
        return q.monic()
    if not q:
        return p.monic()
    if p.is_constant() or q.is_constant():
        return MultiPoly.one(p.nvars)
    if p.is_monomial():
        return _monomial_gcd(p, q)
    if q.is_monomial():
        return _monomial_gcd(q, p)
    vp, vq = set(p.variables()), set(q.variables())
    i = max(vp | vq)
    if i not in vp:
        return _gcd(p, _content(q, i))
    if i not in vq:
        return _gcd(_content(p, i), q)
    cp, cq = _content(p, i), _content(q, i)
    c = _gcd(cp, cq)
    a, b = p.exact_div(cp), q.exact_div(cq)
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    # subresultant PRS: the divisions by g*h**delta are exact
    g = h = MultiPoly.one(p.nvars)
    while True:
        delta = a.degree_in(i) - b.degree_in(i)
        r = _prem(a, b, i)
        if not r:
            break
        if r.degree_in(i) <= 0:
            return c
        a, b = b, r.exact_div(g * h ** delta)
        g = _lead_in(a, i)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
    b = b.exact_div(_content(b, i))
    return (c * b).monic()


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor of two polynomials, not both zero."""
    p._check(q)
    if not p and not q:
        raise ArithmeticError_("gcd of two zero polynomials is undefined")
    return _gcd(p, q)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """Normalized quotient ``num/den``: coprime, ``den`` monic under grlex."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: Optional[MultiPoly] = None, _normal: bool = False):
        if den is None:
            den = MultiPoly.one(num.nvars)
        num._check(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normal:
            num, den = _normalize_pair(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def zero(cls, nvars: int) -> "RatFunc":
        return cls(MultiPoly.zero(nvars), MultiPoly.one(nvars), _normal=True)

    @classmethod
    def one(cls, nvars: int) -> "RatFunc":
        return cls(MultiPoly.one(nvars), MultiPoly.one(nvars), _normal=True)

    @classmethod
    def constant(cls, c, nvars: int) -> "RatFunc":
        return cls(MultiPoly.constant(c, nvars), MultiPoly.one(nvars), _normal=True)

    @classmethod
    def var(cls, i: int, nvars: int) -> "RatFunc":
        return cls(MultiPoly.var(i, nvars), MultiPoly.one(nvars), _normal=True)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, MultiPoly.one(p.nvars), _normal=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ArithmeticError_("rational function is not constant")
        return self.num.constant_value()

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant():
            raise ArithmeticError_("rational function is not a polynomial")
        return self.num

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.num.variables()) | set(self.den.variables())))

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, MultiPoly):
            return self.den.is_constant() and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()!r})"

    def to_str(self, names=None) -> str:
        n = self.num.to_str(names)
        if self.den.is_constant():
            return n
        return f"({n})/({self.den.to_str(names)})"

    __str__ = to_str

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            self.num._check(other.num)
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _normal=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num.scale(other), self.den, _normal=True) if other else RatFunc.zero(self.nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc(self.num * other.num, MultiPoly.one(self.nvars), _normal=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _normal=True)

    def diff(self, i: int) -> "RatFunc":
        """Quotient rule: (a/b)' = (a' b - a b') / b^2."""
        if self.den.is_constant():
            return RatFunc(self.num.diff(i), self.den, _normal=True)
        a, b = self.num, self.den
        return RatFunc(a.diff(i) * b - a * b.diff(i), b * b)

    def compose(self, images) -> "RatFunc":
        n = self.num.compose(images)
        d = self.den.compose(images)
        n = n if isinstance(n, RatFunc) else RatFunc.from_poly(n)
        d = d if isinstance(d, RatFunc) else RatFunc.from_poly(d)
        return n / d


def _normalize_pair(num: MultiPoly, den: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    if not num:
        return MultiPoly.zero(num.nvars), MultiPoly.one(num.nvars)
    if den.is_constant():
        c = den.constant_value()
        return num.scale(1 / c), MultiPoly.one(num.nvars)
    g = _gcd(num, den)
    if not g.is_constant():
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.leading_coeff()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


def rat_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Canonical form of ``num/den``."""
    if not den:
        raise ArithmeticError_("zero denominator")
    return RatFunc(num, den)


def partial_derivative(f: RatFunc, i: int) -> RatFunc:
    if isinstance(f, MultiPoly):
        f = RatFunc.from_poly(f)
    return f.diff(i)


def formal_integrate(f: MultiPoly, i: int) -> MultiPoly:
    """Antiderivative in ``x_i`` with no ``x_i``-free part added."""
    return f.integrate(i)


def potential(f: MultiPoly, g: MultiPoly, u: int, v: int) -> MultiPoly:
    """Polynomial ``h`` with ``dh/du = f`` and ``dh/dv = g``.

    Integrates ``f`` in ``u`` and corrects along ``v``; the closedness
    condition ``df/dv == dg/du`` is checked, never assumed.
    """
    f._check(g)
    if u == v:
        raise ArithmeticError_("potential needs two distinct variables")
    if f.diff(v) != g.diff(u):
        raise ClosednessError("pair is not closed: df/dv != dg/du")
    h = f.integrate(u)
    rest = g - h.diff(v)
    # closedness makes rest free of u
    h = h + rest.integrate(v)
    c = h.constant_term()
    return h - c if c else h


def divided_power(p, k: int):
    """``p**k / k!``."""
    return (p ** k) * Fraction(1, factorial(k))
