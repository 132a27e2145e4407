import random
from fractions import Fraction

import pytest

from bbgkz import linalg, tep
from bbgkz.errors import ConfigurationError
from bbgkz.tep import LaurentMatrix, LPoly


def jordan(sizes):
    d = sum(sizes)
    N = [[Fraction(0)] * d for _ in range(d)]
    pos = 0
    for s in sizes:
        for i in range(s - 1):
            N[pos + i + 1][pos + i] = Fraction(1)
        pos += s
    return N


def test_lpoly_arithmetic():
    l = LPoly.mono(1)
    p = (l + 1) * (l - 1)
    assert p == LPoly({2: 1, 0: -1})
    assert p.neg_lambda() == p
    assert LPoly.mono(-1).neg_lambda() == LPoly.mono(-1, -1)
    assert LPoly.from_json(p.to_json()) == p
    assert p(2) == 3


def test_laurent_matrix_nondegenerate():
    l = LPoly.mono(1)
    M = LaurentMatrix([[l, LPoly.const(1)], [LPoly.const(1), l]])
    assert M.is_nondegenerate()
    Z = LaurentMatrix([[l, l], [l, l]])
    assert not Z.is_nondegenerate()


def test_rees_round_trip():
    fs = tep.FilteredSpace.from_steps(3, {-1: [[1, 0, 0]], 2: [[1, 0, 0], [0, 1, 1]], 4: linalg.identity(3)})
    module = tep.rees(fs)
    assert module.graded_ranks() == {-1: 1, 2: 1, 4: 1}
    assert tep.unrees(module) == fs


def test_unrees_rejects_non_free():
    with pytest.raises(ConfigurationError):
        tep.unrees(tep.ReesModule(2, ((0, (1, 0)), (1, (2, 0)))))


def test_filtration_must_increase():
    with pytest.raises(ConfigurationError):
        tep.FilteredSpace.from_steps(2, {0: [[1, 0]], 1: [[0, 1]], 2: linalg.identity(2)})


@pytest.mark.parametrize("sizes", [(1,), (2,), (3, 1), (4, 1, 1), (2, 2), (3, 2, 1)])
def test_weight_filtration_jordan(sizes):
    N = jordan(sizes)
    W = tep.weight_filtration(N)
    assert W.jordan_type() == tuple(sorted(sizes, reverse=True))
    assert all(tep.check_weight_filtration(N, W).values())
    oracle = tep.weight_filtration_oracle(N)
    for k, Wk in oracle.items():
        assert linalg.same_span(W.W(k), Wk)


def test_weight_filtration_gr_dims():
    W = tep.weight_filtration(jordan((4, 1, 1)))
    assert W.gr_dims() == {3: 1, 1: 1, 0: 2, -1: 1, -3: 1}


def test_not_nilpotent():
    with pytest.raises(ConfigurationError, match="not nilpotent"):
        tep.nilpotency_index([[1, 0], [0, 0]])


def test_twist_formula():
    rng = random.Random(1)
    for _ in range(20):
        nps = tep.random_paired_space(rng, rng.randint(1, 5), rng.randint(-2, 2))
        a = rng.randint(-2, 2)
        tw = tep.twist(nps.model, a)
        assert tw.symmetry_ok()
        v1 = [tep.random_even_lpoly(rng) + LPoly.mono(1, rng.randint(-1, 1)) for _ in range(nps.dim)]
        v2 = [tep.random_even_lpoly(rng) for _ in range(nps.dim)]
        expected = nps.model.pair(v1, v2) * LPoly.mono(-2 * a, (-1) ** a)
        assert tw.pair(v1, v2) == expected


def test_random_spaces_are_valid():
    rng = random.Random(7)
    for _ in range(15):
        nps = tep.random_paired_space(rng, rng.randint(1, 7), rng.randint(-3, 3))
        nps.validate()
        assert nps.model.is_nondegenerate()


def test_specialization_sign_laws():
    rng = random.Random(11)
    for _ in range(15):
        nps = tep.random_paired_space(rng, rng.randint(1, 7), rng.randint(-3, 3))
        sp = tep.specialize_pairing(nps)
        for k, s in sp.items():
            assert s.weight == nps.model.weight + k
            assert s.model().symmetry_ok() and s.model().is_nondegenerate()
            if k >= 0:
                assert tep.specialize_via_right(nps, k) == s.Q.scale((-1) ** k)


def test_mixed_assembly_validates():
    rng = random.Random(13)
    for _ in range(10):
        nps = tep.random_paired_space(rng, rng.randint(1, 7), rng.randint(-3, 3))
        for model in tep.mixed_tep_assemble(nps).values():
            assert all(tep.mixed_tep_validate(model).values())


def test_incompatible_pairing_rejected():
    N0 = jordan((2,))
    Q = LaurentMatrix.constant([[1, 0], [0, 1]])
    nps = tep.NilpotentPairedSpace(tep.PairingModel(2, 0, Q), tuple(map(tuple, N0)))
    with pytest.raises(ConfigurationError, match="compatible"):
        nps.validate()
