"""Derivations of Q(x1..xn) and triangular changes of coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .arith import ArithmeticError_, MultiPoly, RatFunc

__all__ = [
    "Automorphism",
    "Derivation",
    "DimensionError",
    "apply",
    "bracket",
    "pushforward",
    "scale",
]


class DimensionError(ValueError):
    pass


def _as_ratfunc(c, nvars: int) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, MultiPoly):
        return RatFunc.from_poly(c)
    return RatFunc.constant(c, nvars)


@dataclass(frozen=True)
class Derivation:
    """The vector field ``sum_i coeffs[i] * d/dx_i``."""

    coeffs: Tuple[RatFunc, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise DimensionError("a derivation needs at least one variable")
        n = len(coeffs)
        object.__setattr__(self, "coeffs", tuple(_as_ratfunc(c, n) for c in coeffs))
        if any(c.nvars != n for c in self.coeffs):
            raise DimensionError("coefficient ring does not match the number of coordinates")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, nvars: int) -> "Derivation":
        return cls(tuple(RatFunc.zero(nvars) for _ in range(nvars)))

    @classmethod
    def partial(cls, i: int, nvars: int) -> "Derivation":
        return cls(tuple(RatFunc.constant(int(j == i), nvars) for j in range(nvars)))

    @classmethod
    def from_polys(cls, polys: Iterable) -> "Derivation":
        polys = list(polys)
        return cls(tuple(_as_ratfunc(p, len(polys)) for p in polys))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def _check(self, other: "Derivation") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"dimension mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Derivation":
        return Derivation(tuple(-a for a in self.coeffs))

    def __mul__(self, c) -> "Derivation":
        # constants and rational functions act on the left or right alike
        if isinstance(c, (int, Fraction, MultiPoly, RatFunc)):
            return scale(c, self)
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, r):
        return apply(self, r)

    def to_str(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            d = f"d{i + 1}"
            if not c.is_polynomial():
                parts.append(("+", f"({c.to_str()})*{d}"))
                continue
            for e, v in c.num.sorted_terms():
                sign = "-" if v < 0 else "+"
                a = -v if v < 0 else v
                factors = []
                if a != 1:
                    factors.append(str(a.numerator) if a.denominator == 1
                                   else f"({a.numerator}/{a.denominator})")
                for j, k in enumerate(e):
                    if k == 1:
                        factors.append(f"x{j + 1}")
                    elif k > 1:
                        factors.append(f"x{j + 1}^{k}")
                factors.append(d)
                parts.append((sign, "*".join(factors)))
        if not parts:
            return "0"
        out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"Derivation({self.to_str()!r})"


def apply(D: Derivation, r) -> RatFunc:
    """``D(r) = sum_i coeffs[i] * dr/dx_i``."""
    r = _as_ratfunc(r, D.nvars)
    if r.nvars != D.nvars:
        raise DimensionError(f"dimension mismatch: {D.nvars} vs {r.nvars}")
    if r.is_constant():
        return RatFunc.zero(D.nvars)
    if r.is_polynomial() and D.is_polynomial():
        # stay in the polynomial ring: no gcds needed
        acc = MultiPoly.zero(D.nvars)
        for i, c in enumerate(D.coeffs):
            if c:
                d = r.num.diff(i)
                if d:
                    acc = acc + c.num * d
        return RatFunc.from_poly(acc)
    acc = RatFunc.zero(D.nvars)
    for i, c in enumerate(D.coeffs):
        if c:
            d = r.diff(i)
            if d:
                acc = acc + c * d
    return acc


def bracket(D1: Derivation, D2: Derivation) -> Derivation:
    """Lie bracket: coefficient j is ``D1(D2_j) - D2(D1_j)``."""
    D1._check(D2)
    return Derivation(tuple(apply(D1, b) - apply(D2, a) for a, b in zip(D1.coeffs, D2.coeffs)))


def scale(r, D: Derivation) -> Derivation:
    """The derivation ``r * D``."""
    if isinstance(r, (int, Fraction)):
        return Derivation(tuple(c * r for c in D.coeffs))
    r = _as_ratfunc(r, D.nvars)
    if r.nvars != D.nvars:
        raise DimensionError(f"dimension mismatch: {D.nvars} vs {r.nvars}")
    return Derivation(tuple(r * c for c in D.coeffs))


def _compose_all(polys: Sequence[MultiPoly], images: Sequence[MultiPoly]) -> Tuple[MultiPoly, ...]:
    return tuple(p.compose(images) for p in polys)


@dataclass(frozen=True)
class Automorphism:
    """Polynomial automorphism ``x_i -> images[i]`` with its inverse.

    Build triangular ones with :meth:`triangular`; passing both tuples
    directly is allowed and is checked.
    """

    images: Tuple[MultiPoly, ...]
    inverse_images: Tuple[MultiPoly, ...]

    def __post_init__(self):
        n = len(self.images)
        if len(self.inverse_images) != n or any(
                p.nvars != n for p in self.images + self.inverse_images):
            raise DimensionError("automorphism images must be polynomials in n variables")
        ident = tuple(MultiPoly.var(i, n) for i in range(n))
        if (_compose_all(self.images, self.inverse_images) != ident
                or _compose_all(self.inverse_images, self.images) != ident):
            raise ArithmeticError_("substitution is not invertible with the given inverse")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, nvars: int) -> "Automorphism":
        ident = tuple(MultiPoly.var(i, nvars) for i in range(nvars))
        return cls(ident, ident)

    @classmethod
    def triangular(cls, images: Sequence[MultiPoly]) -> "Automorphism":
        """Accepts ``x_i -> c_i x_i + p_i(x_{i+1}, ..., x_n)`` with ``c_i != 0``.

        The inverse is found by back-substitution from the last variable.
        """
        images = tuple(images)
        n = len(images)
        scales, tails = [], []
        for i, p in enumerate(images):
            xi = MultiPoly.var(i, n)
            c = Fraction(0)
            for e, v in p.terms.items():
                if any(e[:i]):
                    raise ArithmeticError_(f"image of x{i + 1} depends on an earlier variable")
                if e[i]:
                    if e != tuple(xi.terms)[0]:
                        raise ArithmeticError_(f"image of x{i + 1} is not affine in x{i + 1}")
                    c = v
            if not c:
                raise ArithmeticError_(f"image of x{i + 1} does not involve x{i + 1}")
            scales.append(c)
            tails.append(p - xi.scale(c))
        inverse = [None] * n
        for i in reversed(range(n)):
            subs = [MultiPoly.var(j, n) if j <= i else inverse[j] for j in range(n)]
            inverse[i] = (MultiPoly.var(i, n) - tails[i].compose(subs)).scale(1 / scales[i])
        return cls(images, tuple(inverse))

    def __call__(self, r) -> RatFunc:
        """Ring action ``r -> r(images)``."""
        r = _as_ratfunc(r, self.nvars)
        return r.compose([RatFunc.from_poly(p) for p in self.images])

    def inverse(self) -> "Automorphism":
        return Automorphism(self.inverse_images, self.images)


def pushforward(D: Derivation, phi: Automorphism) -> Derivation:
    """Conjugate ``phi o D o phi^-1``: coefficient j is ``phi(D(phi^-1(x_j)))``."""
    if D.nvars != phi.nvars:
        raise DimensionError(f"dimension mismatch: {D.nvars} vs {phi.nvars}")
    return Derivation(tuple(phi(apply(D, RatFunc.from_poly(q))) for q in phi.inverse_images))
