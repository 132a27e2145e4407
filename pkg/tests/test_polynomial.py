from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bbgkz.errors import ResourceLimit
from bbgkz.polynomial import MonomialOrder, Polynomial, groebner, lattice_ideal, saturate


def poly(terms, n):
    return Polynomial({tuple(e): c for e, c in terms}, n)


x, y, z = (Polynomial.variable(i, 3) for i in range(3))


def to_sympy(p, gens):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([g**k for g, k in zip(gens, e)])
               for e, c in p.terms.items())


def test_arithmetic():
    p = (x + y) ** 2
    assert p == x * x + 2 * x * y + y * y
    assert (p - p).is_zero()
    assert p.derivative(0) == 2 * x + 2 * y
    assert p.evaluate([1, 2, 0]) == 9


def test_json_round_trip():
    p = x * y - Fraction(1, 3) * z ** 2
    assert Polynomial.from_json(p.to_json()) == p


def test_to_str():
    X = Polynomial.variable(0, 1)
    assert (X * X - 1).to_str() == "x1^2 - 1"


def test_unit_ideal():
    X, Y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    gb = groebner([X * Y - 1, X * X], MonomialOrder("grevlex", 2))
    assert gb.is_unit()


def test_lex_basis():
    X, Y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    gb = groebner([X - Y, Y * Y - 1], MonomialOrder("lex", 2))
    assert set(gb.generators) == {X - Y, Y * Y - 1}


def test_saturation_examples():
    X, Y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    assert set(saturate([X * Y], X).generators) == {Y}
    assert set(saturate([X], Y).generators) == {X}
    assert saturate([X * X], X).is_unit()


def test_lattice_ideal_small():
    gb = lattice_ideal([[3, -2]], 2)
    X1, X2 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    assert [g.monic(gb.order) for g in gb.generators] == [(X2 ** 2 - X1 ** 3).monic(gb.order)]


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        groebner([x * y - z, x * z - y], MonomialOrder("grevlex", 3), max_pairs=0)


# reduced Groebner bases compared with sympy.groebner on random ideals
coef = st.integers(-3, 3)
expo = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
polys = st.lists(st.tuples(expo, coef), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    ps = [poly(t, 3) for t in gens]
    ps = [p for p in ps if not p.is_zero()]
    if not ps:
        return
    sx = sympy.symbols("x1 x2 x3")
    ours = groebner(ps, MonomialOrder("grevlex", 3))
    ref = sympy.groebner([to_sympy(p, sx) for p in ps], *sx, order="grevlex")
    mine = {sympy.expand(to_sympy(g.monic(ours.order), sx)) for g in ours.generators}
    theirs = {sympy.expand(g / sympy.Poly(g, *sx).LC(order="grevlex")) for g in ref.exprs}
    assert mine == theirs
