from fractions import Fraction

import pytest

from bbgkz import linalg, toric
from bbgkz.errors import ConfigurationError


def ring(fan):
    return toric.cohomology_ring(fan)


def test_p1():
    R = ring(toric.projective_space_fan(1))
    assert R.betti() == [1, 1]
    H = R.divisor(0)
    assert not any(R.multiply(H, H))
    assert R.integrate(H) == 1


def test_p2():
    R = ring(toric.projective_space_fan(2))
    assert R.betti() == [1, 1, 1]
    H = R.divisor(0)
    assert R.integrate(R.power(H, 2)) == 1
    # all ray divisors are linearly equivalent on P^2
    assert R.divisor(0) == R.divisor(1) == R.divisor(2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_space_top_power(n):
    R = ring(toric.projective_space_fan(n))
    assert R.betti() == [1] * (n + 1)
    assert R.integrate(R.power(R.divisor(0), n)) == 1


def test_p1xp1():
    p1 = toric.projective_space_fan(1)
    R = ring(toric.product_fan(p1, p1))
    assert R.betti() == [1, 2, 1]
    assert R.integrate(R.multiply(R.divisor(0), R.divisor(2))) == 1
    assert R.integrate(R.multiply(R.divisor(0), R.divisor(0))) == 0


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_hirzebruch_self_intersections(a):
    # D_i^2 = -b_i where rho_{i-1} + rho_{i+1} = b_i rho_i
    R = ring(toric.hirzebruch_fan(a))
    sq = [R.integrate(R.multiply(R.divisor(i), R.divisor(i))) for i in range(4)]
    assert sq == [0, -a, 0, a]


def test_poincare_duality():
    for fan in (toric.projective_space_fan(3), toric.hirzebruch_fan(2)):
        R = ring(fan)
        assert linalg.det(R.pairing_matrix()) != 0


def test_point_class_is_cone_independent():
    R = ring(toric.hirzebruch_fan(2))
    for cone in R.fan.cones:
        v = R.one()
        for i in cone:
            v = R.multiply(v, R.divisor(i))
        assert R.integrate(v) == 1


def test_non_smooth_cone_rejected():
    fan = toric.Fan(((1, 0), (1, 2), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    with pytest.raises(ConfigurationError, match="not smooth"):
        toric.cohomology_ring(fan)


def test_wall_condition():
    fan = toric.Fan(((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2)))
    with pytest.raises(ConfigurationError, match="wall"):
        toric.cohomology_ring(fan)


def test_fan_json_round_trip():
    fan = toric.hirzebruch_fan(1)
    assert toric.Fan.from_json(fan.to_json()) == fan
    with pytest.raises(ConfigurationError):
        toric.Fan.from_json({"rays": []})


def test_chern_classes():
    R = ring(toric.projective_space_fan(2))
    c = toric.chern_classes(R, [[1, 1, 1]])
    H = R.divisor(0)
    assert c[0] == R.one()
    assert c[1] == [-3 * x for x in H]
    assert toric.chern_classes(R, []) == [R.one()]
    R1 = ring(toric.projective_space_fan(1))
    c = toric.chern_classes(R1, [[1, 0], [1, 0]])
    assert c[1] == [-2 * x for x in R1.divisor(0)]
    assert not any(c[2])
    with pytest.raises(ConfigurationError):
        toric.chern_classes(R, [[1, 1]])
