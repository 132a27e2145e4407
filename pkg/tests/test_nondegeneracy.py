from bbgkz.nondegeneracy import face_polynomial, nondegeneracy_check, torus_empty
from bbgkz.polynomial import Polynomial

from conftest import GAUSS


def test_gauss_generic_coefficients():
    rep = nondegeneracy_check(GAUSS, [1, 1, 1])
    assert rep.nondegenerate
    assert all(f.nondegenerate for f in rep.faces)


def test_gauss_degenerate_on_edge_only():
    rep = nondegeneracy_check(GAUSS, [1, -2, 1])
    assert not rep.nondegenerate
    assert [f.index_set for f in rep.failing()] == [(1, 2, 3)]
    vertices = [f for f in rep.faces if f.dimension == 0]
    assert vertices and all(f.nondegenerate for f in vertices)


def test_vanishing_vertex_coefficient():
    rep = nondegeneracy_check(GAUSS, [0, 1, 1])
    bad = {f.index_set: f.reason for f in rep.failing()}
    assert bad[(1,)] == "vanishing face coefficients"


def test_face_polynomial_shift():
    G, shift = face_polynomial(GAUSS, [1, -2, 1], (1, 2, 3))
    assert shift == (1, 0)
    t2 = Polynomial.variable(1, 2)
    assert G == t2 * t2 - 2 * t2 + 1


def test_torus_empty():
    t = Polynomial.variable(0, 1)
    assert torus_empty([t], 1)
    assert not torus_empty([t - 1], 1)


def test_report_json():
    data = nondegeneracy_check(GAUSS, [1, 1, 1]).to_json()
    assert data["nondegenerate"] is True
    assert {tuple(f["index_set"]) for f in data["faces"]} >= {(1, 2, 3)}
