from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilderiv.arith import MultiPoly, RatFunc
from nilderiv.derivations import Derivation

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def polys(draw, nvars=3, max_degree=3, max_terms=4):
    nterms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(nterms):
        d = draw(st.integers(0, max_degree))
        e = [0] * nvars
        for _ in range(d):
            e[draw(st.integers(0, nvars - 1))] += 1
        terms[tuple(e)] = draw(small_fractions)
    return MultiPoly(nvars, terms)


@st.composite
def nonzero_polys(draw, **kw):
    p = draw(polys(**kw))
    return p if p else MultiPoly.one(kw.get("nvars", 3))


@st.composite
def ratfuncs(draw, nvars=3, max_degree=2):
    num = draw(polys(nvars=nvars, max_degree=max_degree, max_terms=3))
    den = draw(nonzero_polys(nvars=nvars, max_degree=max_degree, max_terms=2))
    return RatFunc(num, den)


@st.composite
def derivations(draw, nvars=3, max_degree=3, rational=False):
    if rational:
        return Derivation(tuple(draw(ratfuncs(nvars=nvars)) for _ in range(nvars)))
    return Derivation.from_polys([draw(polys(nvars=nvars, max_degree=max_degree))
                                  for _ in range(nvars)])


def x(i, n=3):
    """The coordinate x_i, 1-based as in the printed notation."""
    return MultiPoly.var(i - 1, n)


def d(i, n=3):
    return Derivation.partial(i - 1, n)


def field(*coeffs):
    n = len(coeffs)
    return Derivation.from_polys([MultiPoly.constant(c, n) if not isinstance(c, MultiPoly) else c
                                  for c in coeffs])


# acceptance results, printed once at the end of the run
ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
