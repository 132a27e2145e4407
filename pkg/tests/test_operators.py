import random
from fractions import Fraction

import pytest

from bbgkz import operators as ops
from bbgkz.errors import ConfigurationError
from bbgkz.operators import OperatorElement as Op

from conftest import A23, GAUSS


def test_weyl_relation():
    x, d = Op.x(0, 1), Op.dx(0, 1)
    assert d * x == x * d + 1
    assert ops.commutator(d, x) == Op.constant(1, 1)


def test_second_order_expansion():
    x, d = Op.x(0, 1), Op.dx(0, 1)
    assert d * d * x * x == x * x * d * d + 4 * x * d + 2


def test_lambda_relation():
    l, dl = Op.lam(1), Op.dlam(1)
    lhs = (l * l * dl) * l
    assert lhs == l * l * l * dl + l * l


def test_rtilde_membership():
    l, dl = Op.lam(1), Op.dlam(1)
    g = l * l * dl
    assert ops.rtilde_membership(g * g)
    assert ops.rtilde_membership(l * Op.dx(0, 1))
    assert not ops.rtilde_membership(Op.dx(0, 1))
    assert not ops.rtilde_membership(l * dl)
    assert ops.rtilde_violations(Op.dx(0, 1) + l * Op.dx(0, 1)) == [(0, (0,), 0, (1,))]


def test_to_str_and_json():
    op = Op.lam(1) ** 2 * Op.dlam(1) + 3 * Op.x(0, 1) * Op.dx(0, 1)
    assert op.to_str() == "l^2*dl + 3*x1*dx1"
    assert Op.from_json(op.to_json()) == op


def test_order_and_symbol():
    op = Op.dx(0, 2) * Op.dx(1, 2) + Op.x(0, 2)
    assert op.order() == 2
    assert list(op.principal_symbol()) == [(0, (0, 0), 0, (1, 1))]


def test_box_operator():
    assert ops.box_operator((3, -2)) == Op.dx(0, 2) ** 3 - Op.dx(1, 2) ** 2
    lam = ops.box_operator((3, -2), "lambda")
    assert ops.rtilde_membership(lam)


def test_euler_operator_and_range():
    E = ops.euler_operator(A23, 1, [Fraction(1, 2)])
    assert E == 2 * Op.x(0, 2) * Op.dx(0, 2) + 3 * Op.x(1, 2) * Op.dx(1, 2) - Fraction(1, 2)
    with pytest.raises(ConfigurationError):
        ops.euler_operator(A23, 2, [0])


def test_conjugation_identities():
    report = ops.conjugation_report(GAUSS, [1, 2], (3, 3), (1, 1), (1, 0, 1))
    assert report == {"euler_d": True, "euler_rtilde": True, "grading_rtilde": True,
                      "grading_single": True, "box": True}


def test_conjugation_rejects_bad_shift():
    with pytest.raises(ConfigurationError):
        ops.verify_conjugation(GAUSS, [0, 0], (3, 3), (1, 1), (1, 1, 1))
    with pytest.raises(ConfigurationError):
        ops.verify_conjugation(GAUSS, [0, 0], (0, -1), (1, 1), (-1, 0, 0))


def test_literal_euler_order_fails_when_shift_nonzero():
    # E(c2) B = B E(c1) with the shifts swapped does not hold
    B = ops.ldx_power((1, 0, 1))
    E1 = ops.shifted_rtilde_euler(GAUSS, [0, 0], (3, 3))
    E2 = ops.shifted_rtilde_euler(GAUSS, [0, 0], (1, 1))
    assert any(e2 * B != B * e1 for e1, e2 in zip(E1, E2))
    assert all(e1 * B == B * e2 for e1, e2 in zip(E1, E2))


def test_associativity_random():
    rng = random.Random(5)
    gens = [Op.x(0, 2), Op.x(1, 2), Op.dx(0, 2), Op.dx(1, 2), Op.lam(2), Op.dlam(2)]
    for _ in range(30):
        a, b, c = (sum((rng.randint(-2, 2) * rng.choice(gens) * rng.choice(gens) for _ in range(2)), Op.constant(0, 2))
                   for _ in range(3))
        assert (a * b) * c == a * (b * c)
