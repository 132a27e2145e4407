from fractions import Fraction
from math import factorial

import pytest
import sympy

from bbgkz import gkz
from bbgkz.errors import BoundInsufficient, ConfigurationError
from bbgkz.operators import OperatorElement as Op
from bbgkz.operators import rtilde_membership

from conftest import A23, GAUSS, LOCAL_P2, TWISTED_CUBIC


def texts(ideal):
    return [g.to_str() for g in ideal.generators]


def test_ordinary_ideal_a23():
    ideal = gkz.build_ordinary_ideal(A23, [0])
    assert texts(ideal) == ["dx1^3 - dx2^2", "2*x1*dx1 + 3*x2*dx2"]


def test_lambda_ideal_a23():
    ideal = gkz.build_lambda_ideal(A23, [0])
    assert texts(ideal) == [
        "l^3*dx1^3 - l^2*dx2^2",
        "l^2*dl + l*x1*dx1 + l*x2*dx2 + l",
        "2*l*x1*dx1 + 3*l*x2*dx2",
    ]
    assert all(rtilde_membership(g) for g in ideal.generators)


def test_box_vectors_twisted_cubic():
    assert len(gkz.box_vectors(TWISTED_CUBIC)) == 3


def test_presentation_local_p2():
    pres = gkz.build_bb_presentation(LOCAL_P2, "interior", [0, 0, 0], 4)
    assert pres.module_generators == ((0, 0, 1),)
    assert len(pres.relation_schemas) == LOCAL_P2.m + LOCAL_P2.n
    data = pres.to_json()
    assert data["relations"][0] == "dx1 e(0,0,1) = e(1,0,2)"


def test_presentation_rejects_points_outside_cone():
    with pytest.raises(ConfigurationError):
        gkz.build_bb_presentation(A23, [[-1]], [0])


def test_intertwiner():
    it = gkz.intertwiner(A23, [0], [5], [0])
    assert it.b == (1, 1)
    assert it.d_level == Op.dx(0, 2) * Op.dx(1, 2)
    assert it.verified
    with pytest.raises(BoundInsufficient):
        gkz.intertwiner(A23, [0], [1], [0])


def test_trivial_intertwiner():
    it = gkz.intertwiner(GAUSS, [0, 0], [1, 1], [1, 1])
    assert it.b == (0, 0, 0) and it.verified


def closed_form_log_series(R):
    # log z + sum_{k=1}^R 2 (2k-1)! / (k!)^2 z^k,  z = x1 x3 / x2^2
    x1, x2, x3 = sympy.symbols("x1 x2 x3", positive=True)
    z = x1 * x3 / x2**2
    phi = sympy.log(z) + sum(sympy.Rational(2 * factorial(2 * k - 1), factorial(k) ** 2) * z**k for k in range(1, R + 1))
    return phi, (x1, x2, x3)


@pytest.mark.parametrize("R", [2, 4, 6])
def test_gauss_log_series_matches_closed_form(R):
    s = gkz.gamma_series(GAUSS, [0, 0], [0, 0, 0], R, [1, -2, 1]).series
    zval = Fraction(1, 100)
    A, B = s.evaluate([1, 1, zval])
    assert B == 1
    assert A == sum(Fraction(2 * factorial(2 * k - 1), factorial(k) ** 2) * zval**k for k in range(1, R + 1))


@pytest.mark.parametrize("R", [2, 3, 6])
def test_gauss_residual_against_symbolic_oracle(R):
    phi, (x1, x2, x3) = closed_form_log_series(R)
    box = sympy.diff(phi, x1, x3) - sympy.diff(phi, x2, 2)
    expected = abs(box.subs({x1: 1, x2: 1, x3: sympy.Rational(1, 100)}))
    s = gkz.gamma_series(GAUSS, [0, 0], [0, 0, 0], R, [1, -2, 1]).series
    res = gkz.residuals_by_generator(gkz.build_ordinary_ideal(GAUSS, [0, 0]), s, [1, 1, Fraction(1, 100)])
    assert res["box[-1, 2, -1]"] == Fraction(int(expected.p), int(expected.q))
    assert res["euler1"] == 0 and res["euler2"] == 0


def test_gauss_residual_frozen():
    # exact values of the box residual for radii 2..6
    expected = [Fraction(3, 500), Fraction(7, 25000), Fraction(63, 5000000),
                Fraction(693, 1250000000), Fraction(3003, 125000000000)]
    ideal = gkz.build_ordinary_ideal(GAUSS, [0, 0])
    got = []
    for R in range(2, 7):
        s = gkz.gamma_series(GAUSS, [0, 0], [0, 0, 0], R, [1, -2, 1]).series
        got.append(gkz.residual(ideal, s, [1, 1, Fraction(1, 100)]))
    assert got == expected


def test_gamma_series_validation():
    with pytest.raises(ConfigurationError):
        gkz.gamma_series(GAUSS, [1, 0], [0, 0, 0], 2)
    with pytest.raises(ConfigurationError):
        gkz.gamma_series(GAUSS, [0, 0], [0, 0, 0], 2, [1, 0, 0])


def test_series_json_round_trip():
    s = gkz.gamma_series(GAUSS, [0, 0], [0, 0, 0], 3, [1, -2, 1]).series
    assert gkz.LogSeries.from_json(s.to_json()) == s


def test_apply_rejects_lambda():
    s = gkz.gamma_series(A23, [0], [0, 0], 2).series
    with pytest.raises(ValueError):
        s.apply(Op.lam(2))


def test_bb_tuple_a23_exact():
    pres = gkz.build_bb_presentation(A23, "interior", [0])
    phis = gkz.bb_tuple(pres, [1], [0, Fraction(-1, 3)], 4)
    rep = gkz.bb_solution_check(pres, phis, [Fraction(1, 10), Fraction(1, 8)])
    assert not rep.missing
    assert rep.max_residual == 0 and rep.passed()


def test_bb_check_reports_missing():
    pres = gkz.build_bb_presentation(A23, "interior", [0])
    rep = gkz.bb_solution_check(pres, {}, [1, 1])
    assert rep.missing and not rep.passed()
