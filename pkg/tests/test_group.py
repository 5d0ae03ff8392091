import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from metamorphism import group as G
from metamorphism.group import AlgebraVector, GroupElement

coord = st.floats(-5, 5, allow_nan=False)
scale = st.floats(0.1, 10, allow_nan=False)
elements = st.builds(GroupElement, coord, coord, coord, coord, scale)


def close(a, b, tol=1e-12):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.abs(b)))


def test_multiply_worked_example():
    g = GroupElement(0, 1, 0, 0, 1) * GroupElement(0, 0, 1, 0, 1)
    assert g.to_list() == [1, 1, 1, 0, 1]


def test_multiply_by_hand():
    # s + s' + x y'/r - b (y'/r)^2 / 2 = 1 + 2 + 3*4/2 - 0.5*5*4 = -1
    g = GroupElement(1, 3, 0.5, 5, 2) * GroupElement(2, 1, 4, 1, 3)
    assert g.to_list() == pytest.approx([-1.0, 3 + 2 - 10, 2.5, 9.0, 6.0])


def test_identity_is_neutral():
    g = GroupElement(0.3, -1.2, 2.0, 0.7, 1.9)
    e = GroupElement.identity()
    assert (g * e).to_list() == pytest.approx(g.to_list())
    assert (e * g).to_list() == pytest.approx(g.to_list())


@pytest.mark.parametrize("r", [0.0, -1.0, math.nan])
def test_rejects_nonpositive_or_nan_r(r):
    with pytest.raises(ValueError):
        GroupElement(0, 0, 0, 0, r)


def test_from_array_requires_five():
    with pytest.raises(ValueError):
        GroupElement.from_array([1, 2, 3])


@settings(max_examples=200, deadline=None)
@given(elements, elements, elements)
def test_associativity(g1, g2, g3):
    assert close(((g1 * g2) * g3).as_array(), (g1 * (g2 * g3)).as_array())


@settings(max_examples=200, deadline=None)
@given(elements, elements)
def test_matrix_is_homomorphism(g1, g2):
    assert close(G.to_matrix(g1 * g2), G.to_matrix(g1) @ G.to_matrix(g2))


@settings(max_examples=200, deadline=None)
@given(elements)
def test_inverse_matches_matrix_inverse(g):
    assert close(G.to_matrix(G.inverse(g)), np.linalg.inv(G.to_matrix(g)), 1e-10)
    assert close((g * g.inverse()).as_array(), GroupElement().as_array(), 1e-10)


@settings(max_examples=100, deadline=None)
@given(elements)
def test_from_matrix_round_trip(g):
    assert close(G.from_matrix(G.to_matrix(g)).as_array(), g.as_array())


@settings(max_examples=100, deadline=None)
@given(elements, elements)
def test_modular_is_multiplicative(g1, g2):
    assert G.modular(g1 * g2) == pytest.approx(G.modular(g1) * G.modular(g2), rel=1e-14)


def test_measures_values():
    left, right, mod = G.measures(GroupElement(r=2.0))
    assert (left, right, mod) == pytest.approx((1 / 8, 1 / 2, 1 / 4))
    assert mod == pytest.approx(left / right)


def test_left_density_invariance_by_jacobian():
    rng = np.random.default_rng(3)
    step = 1e-5
    for _ in range(5):
        g0 = GroupElement(*rng.uniform(-1, 1, 4), rng.uniform(0.5, 2))
        h = GroupElement(*rng.uniform(-1, 1, 4), rng.uniform(0.5, 2))
        base = h.as_array()
        jac = np.empty((5, 5))
        for k in range(5):
            e = np.zeros(5)
            e[k] = step
            jac[:, k] = ((g0 * GroupElement.from_array(base + e)).as_array()
                         - (g0 * GroupElement.from_array(base - e)).as_array()) / (2 * step)
        ratio = G.measures(h)[0] / G.measures(g0 * h)[0]
        assert abs(np.linalg.det(jac)) == pytest.approx(ratio, rel=1e-10)


def test_symplectic_form():
    assert G.symplectic_form(1, 0, 0, 1) == 1
    assert G.symplectic_form(0, 1, 1, 0) == -1
    assert G.symplectic_form(2, 3, 2, 3) == 0


def test_center_decomposition_reassembles():
    g = GroupElement(0.7, 1.1, -0.4, 0.3, 1.6)
    base, s = G.center_decomposition(g)
    again = G.section(base) * GroupElement(s=s)
    assert again.as_array() == pytest.approx(g.as_array())


def test_exp_one_param_R_is_e():
    assert G.exp_one_param("R", 1.0).to_list() == pytest.approx([0, 0, 0, 0, math.e])


@pytest.mark.parametrize("name", G.BASIS)
@pytest.mark.parametrize("t", [-1.3, 0.4, 2.0])
def test_exp_matches_matrix_exponential(name, t):
    assert np.allclose(G.to_matrix(G.exp_one_param(name, t)), expm(t * G.generator_matrix(name)), atol=1e-12)


def test_exp_X_Y_do_not_commute():
    a = G.exp_one_param("X", 1.0) * G.exp_one_param("Y", 1.0)
    b = G.exp_one_param("Y", 1.0) * G.exp_one_param("X", 1.0)
    diff = a.as_array() - b.as_array()
    # they differ only in the centre, by 1 as [X, Y] = S
    assert diff == pytest.approx([1, 0, 0, 0, 0])


def test_exp_unknown_basis():
    with pytest.raises(ValueError):
        G.exp_one_param("Q", 1.0)


TABLE = [("X", "Y", "S", 1), ("X", "R", "X", -1), ("Y", "R", "Y", 1), ("Y", "B", "X", 1), ("R", "B", "B", 2)]


@pytest.mark.parametrize("a,b,out,c", TABLE)
def test_bracket_table(a, b, out, c):
    assert G.bracket(AlgebraVector.basis(a), AlgebraVector.basis(b)) == c * AlgebraVector.basis(out)
    assert G.bracket(AlgebraVector.basis(b), AlgebraVector.basis(a)) == -c * AlgebraVector.basis(out)


@pytest.mark.parametrize("a", G.BASIS)
@pytest.mark.parametrize("b", G.BASIS)
def test_bracket_matches_matrix_commutator(a, b):
    ma, mb = G.generator_matrix(a), G.generator_matrix(b)
    got = G.algebra_matrix(G.bracket(AlgebraVector.basis(a), AlgebraVector.basis(b)))
    assert np.array_equal(ma @ mb - mb @ ma, got)


vectors = st.lists(st.floats(-3, 3, allow_nan=False), min_size=5, max_size=5).map(AlgebraVector)


@settings(max_examples=100, deadline=None)
@given(vectors, vectors, vectors)
def test_jacobi_identity(a, b, c):
    total = G.bracket(a, G.bracket(b, c)) + G.bracket(b, G.bracket(c, a)) + G.bracket(c, G.bracket(a, b))
    assert np.allclose(total.coefficients, 0, atol=1e-10)


def test_algebra_vector_accessors():
    v = AlgebraVector([1, 2, 3, 4, 5])
    assert v["B"] == 4
    assert v.to_list() == [1, 2, 3, 4, 5]
    assert (v - v) == AlgebraVector.zero()
    with pytest.raises(ValueError):
        AlgebraVector([1, 2])
