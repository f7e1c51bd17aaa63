"""Generators for normal-form algebras and random triangular coordinate changes.

Used by the round-trip experiments and the test suite.  All outputs live in
three variables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence, Tuple

from .arith import MultiPoly
from .derivations import Automorphism, Derivation, pushforward

NV = 3


def _field(c1=None, c2=None, c3=None) -> Derivation:
    z = MultiPoly.zero(NV)
    return Derivation.from_polys([c if c is not None else z for c in (c1, c2, c3)])


def _dp(i: int, j: int = 0) -> MultiPoly:
    """``x2^i x3^j / (i! j!)``."""
    return MultiPoly.monomial((0, i, j), Fraction(1, factorial(i) * factorial(j)))


def abelian3() -> List[Derivation]:
    return [Derivation.partial(i, NV) for i in range(NV)]


def heisenberg3() -> List[Derivation]:
    return [_field(MultiPoly.one(NV)), _field(_dp(0, 1), MultiPoly.one(NV)),
            Derivation.partial(2, NV)]


def l1_form(n: int) -> List[Derivation]:
    """``d3, x3^i/i! d1, x3^i/i! d2`` for ``i <= n``."""
    gens = [Derivation.partial(2, NV)]
    gens += [_field(_dp(0, i)) for i in range(n + 1)]
    gens += [_field(None, _dp(0, i)) for i in range(n + 1)]
    return gens


def l2_grid(n: int, m: int) -> List[Tuple[int, int]]:
    """Exponents ``(i, j)`` of ``x2^i x3^j`` on d1 in a closed L2 sample.

    With ``n = 0`` the full square ``i, j <= m`` is closed.  With ``n >= 1``
    the brackets with ``x3^k d2`` trade x2 for x3, so the square is not
    closed; the triangle ``i + j <= m`` is used instead.
    """
    if n == 0:
        return [(i, j) for i in range(m + 1) for j in range(m + 1)]
    if n == 1:
        return [(i, j) for i in range(m + 1) for j in range(m + 1 - i)]
    raise ValueError("L2 samples are provided for n <= 1")


def l2_form(n: int, m: int) -> List[Derivation]:
    gens = [Derivation.partial(2, NV)]
    gens += [_field(None, _dp(0, i)) for i in range(n + 1)]
    gens += [_field(_dp(i, j)) for i, j in l2_grid(n, m)]
    return gens


@dataclass(frozen=True)
class Sample:
    tag: str
    n: Optional[int]
    m: Optional[int]
    gens: Tuple[Derivation, ...]


def normal_form(tag: str, n: Optional[int] = None, m: Optional[int] = None) -> Sample:
    if tag == "Abelian3":
        gens = abelian3()
    elif tag == "Heisenberg3":
        gens = heisenberg3()
    elif tag == "L1":
        gens = l1_form(n)
    elif tag == "L2":
        gens = l2_form(n, m)
    else:
        raise ValueError(f"unknown tag {tag}")
    return Sample(tag, n, m, tuple(gens))


def _rand_fraction(rng: random.Random, bound: int = 3, nonzero: bool = False) -> Fraction:
    while True:
        f = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if f or not nonzero:
            return f


def random_triangular(rng: random.Random, degree: int = 2, nterms: int = 2,
                      nvars: int = NV) -> Automorphism:
    """``x_i -> c_i x_i + p_i(x_{i+1}..)`` with small random rational data."""
    images = []
    for i in range(nvars):
        p = MultiPoly.var(i, nvars).scale(_rand_fraction(rng, nonzero=True))
        later = nvars - i - 1
        for _ in range(nterms if later else 1):
            e = [0] * nvars
            if later:
                for _ in range(rng.randint(0, degree)):
                    e[rng.randint(i + 1, nvars - 1)] += 1
            p = p + MultiPoly.monomial(e, _rand_fraction(rng))
        images.append(p)
    return Automorphism.triangular(images)


def transport(gens: Sequence[Derivation], phi: Automorphism, rng: Optional[random.Random] = None
              ) -> List[Derivation]:
    """Push generators through ``phi``; shuffle them when ``rng`` is given."""
    out = [pushforward(g, phi) for g in gens]
    if rng is not None:
        rng.shuffle(out)
    return out


SAMPLE_FORMS = (
    ("Abelian3", None, None),
    ("Heisenberg3", None, None),
    ("L1", 1, None),
    ("L1", 2, None),
    ("L2", 0, 1),
    ("L2", 0, 2),
    ("L2", 1, 1),
    ("L2", 1, 2),
)


def random_sample(rng: random.Random, degree: int = 2) -> Tuple[Sample, List[Derivation]]:
    tag, n, m = rng.choice(SAMPLE_FORMS)
    s = normal_form(tag, n, m)
    return s, transport(s.gens, random_triangular(rng, degree), rng)
