import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metamorphism import group as G
from metamorphism.fiducial import gaussian
from metamorphism.group import AlgebraVector, GroupElement
from metamorphism.representations import (
    derived_rep_apply,
    derived_rep_numeric,
    lie_derivative,
    lie_derivative_apply,
    quasi_regular_point,
    schrodinger_apply,
    schrodinger_apply_sampled,
)
from metamorphism.signals import Context, WindowOverflowError, hermite, inner_product, sample

CTX = Context()
GRID = CTX.grid()
U = np.linspace(-3, 3, 25)

small = st.floats(-1, 1, allow_nan=False)
elements = st.builds(GroupElement, small, small, small, small, st.floats(0.5, 2))


def direct_action(g, f, u, hbar=1.0):
    v = u - g.y
    return math.sqrt(g.r) * np.exp(2j * np.pi * hbar * (g.s + g.x * v - 0.5 * g.b * v**2)) * f(g.r * v)


@settings(max_examples=60, deadline=None)
@given(elements, st.integers(0, 4))
def test_exact_action_matches_formula(g, n):
    f = hermite(n)
    assert np.allclose(schrodinger_apply(g, f)(U), direct_action(g, f, U), atol=1e-12)


def test_central_element_is_phase():
    f = hermite(2)
    out = schrodinger_apply(GroupElement(s=0.3), f)
    assert np.allclose(out(U), np.exp(2j * np.pi * 0.3) * f(U), atol=1e-14)


def test_identity_leaves_signal():
    f = hermite(3)
    assert np.allclose(schrodinger_apply(GroupElement(), f)(U), f(U), atol=1e-15)
    s = sample(f, GRID)
    assert np.max(np.abs(schrodinger_apply_sampled(GroupElement(), s).values - s.values)) < 1e-12


def test_dilation_of_gaussian():
    r = 1.7
    out = schrodinger_apply(GroupElement(r=r), gaussian())
    assert np.allclose(out(U), math.sqrt(r) * 2**0.25 * np.exp(-np.pi * r**2 * U**2), atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_exact_action_is_homomorphism(g1, g2):
    f = hermite(1)
    lhs = schrodinger_apply(g1, schrodinger_apply(g2, f))
    rhs = schrodinger_apply(g1 * g2, f)
    assert np.allclose(lhs(U), rhs(U), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(elements, st.integers(0, 4))
def test_unitarity(g, n):
    assert schrodinger_apply(g, hermite(n)).norm() == pytest.approx(1.0, abs=1e-10)


def test_sampled_matches_exact():
    rng = np.random.default_rng(1)
    f = hermite(2)
    for _ in range(5):
        g = GroupElement(*rng.uniform(-1, 1, 4), rng.uniform(0.5, 2))
        exact = sample(schrodinger_apply(g, f), GRID).values
        assert np.max(np.abs(schrodinger_apply_sampled(g, sample(f, GRID)).values - exact)) < 1e-8


def test_sampled_homomorphism_on_worked_example():
    s = sample(hermite(2), GRID)
    g1, g2 = GroupElement(0, 1, 0, 0, 1), GroupElement(0, 0, 1, 0, 1)
    lhs = schrodinger_apply_sampled(g1, schrodinger_apply_sampled(g2, s))
    rhs = schrodinger_apply_sampled(GroupElement(1, 1, 1, 0, 1), s)
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-8


def test_sampled_window_overflow():
    with pytest.raises(WindowOverflowError):
        schrodinger_apply_sampled(GroupElement(y=7.0), sample(hermite(0), GRID))
    with pytest.raises(WindowOverflowError):
        schrodinger_apply_sampled(GroupElement(r=0.1), sample(hermite(0), GRID))


def test_quasi_regular_central_and_identity():
    F = lambda x, y, b, r: x + 2j * y + b * r
    p = (0.3, -0.2, 0.5, 1.4)
    assert quasi_regular_point(GroupElement(), F, p) == pytest.approx(F(*p))
    assert quasi_regular_point(GroupElement(s=0.25), F, p) == pytest.approx(1j * F(*p))


def test_quasi_regular_matches_induced_form():
    rng = np.random.default_rng(2)
    F = lambda x, y, b, r: np.exp(-x**2 - y**2 + 1j * b) * r
    for _ in range(100):
        g = GroupElement(*rng.uniform(-1, 1, 4), rng.uniform(0.5, 2))
        p = (*rng.uniform(-1, 1, 3), rng.uniform(0.5, 2))
        base, s = G.center_decomposition(G.inverse(g) * G.section(p))
        expected = np.exp(-2j * np.pi * s) * F(*base)
        assert abs(quasi_regular_point(g, F, p) - expected) < 1e-12


def gap(f, g):
    d = f - g
    return float(np.max(np.abs(d.poly)))


def test_derived_S_is_scalar():
    f = hermite(3)
    assert gap(derived_rep_apply("S", f), 2j * np.pi * f) == 0


def test_gaussian_annihilators():
    g = gaussian()
    heis = derived_rep_apply(AlgebraVector([0, -1, 1j, 0, 0]), g)
    aff = derived_rep_apply(AlgebraVector([1j / (4 * np.pi), 0, 0, 2j, 1]), g)
    assert heis.is_zero(1e-13) and aff.is_zero(1e-13)


@pytest.mark.parametrize("a,b", list(product(G.BASIS, repeat=2)))
def test_derived_commutators(a, b):
    va, vb = AlgebraVector.basis(a), AlgebraVector.basis(b)
    for n in range(5):
        f = hermite(n)
        lhs = derived_rep_apply(va, derived_rep_apply(vb, f)) - derived_rep_apply(vb, derived_rep_apply(va, f))
        rhs = derived_rep_apply(G.bracket(va, vb), f)
        assert gap(lhs, rhs) < 1e-12


@pytest.mark.parametrize("n", range(7))
def test_quadratic_identities(n):
    f = hermite(n)
    d = derived_rep_apply
    q1 = d("X", d("X", f)) + 2 * d("S", d("B", f))
    q2 = d("X", d("Y", f)) + d("Y", d("X", f)) + 2 * d("S", d("R", f))
    assert q1.norm() < 1e-12 and q2.norm() < 1e-12


def test_derived_numeric_S():
    g = gaussian()
    num = derived_rep_numeric("S", g, 1e-4)
    exact = sample(2j * np.pi * g, GRID).values
    assert np.max(np.abs(num.values - exact)) / np.max(np.abs(exact)) < 1e-7


@pytest.mark.parametrize("basis", G.BASIS)
def test_derived_numeric_second_order(basis):
    f = gaussian()
    exact = sample(derived_rep_apply(basis, f), GRID).values
    errs = [np.max(np.abs(derived_rep_numeric(basis, f, t).values - exact)) for t in (1e-2, 5e-3)]
    if errs[0] < 1e-12:
        return  # the S direction is a pure phase: no truncation to measure at this scale
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)


def test_derived_numeric_R_matches_table():
    f = gaussian()
    num = derived_rep_numeric("R", f, 1e-4)
    expected = sample(0.5 * f + f.derivative().times_poly([0, 1]), GRID).values
    assert np.max(np.abs(num.values - expected)) < 1e-6


def test_derived_numeric_requires_positive_step():
    with pytest.raises(ValueError):
        derived_rep_numeric("X", gaussian(), 0)


def poly_field(x, y, b, r):
    return x * b + y**2 * r + x * y + 3 * r**2


def test_lie_S():
    p = (0.2, 0.3, -0.1, 1.2)
    assert lie_derivative_apply("S", poly_field, p) == pytest.approx(-2j * np.pi * poly_field(*p))


def test_lie_B_on_b():
    assert lie_derivative_apply("B", lambda x, y, b, r: b, (0.1, 0.2, 0.3, 1.7)) == pytest.approx(1.7**2)


def test_lie_Y_formula():
    x, y, b, r = 0.4, -0.3, 0.2, 1.5
    fx, fy = b + y, 2 * y * r + x
    expected = (-2j * np.pi * x * poly_field(x, y, b, r) - b * fx + fy) / r
    assert lie_derivative_apply("Y", poly_field, (x, y, b, r)) == pytest.approx(expected, abs=1e-7)


@pytest.mark.parametrize("a,b", list(product(G.BASIS, repeat=2)))
def test_lie_derivatives_represent_algebra(a, b):
    p = (0.3, -0.4, 0.2, 1.3)
    La, Lb = lie_derivative(a, poly_field), lie_derivative(b, poly_field)
    lhs = lie_derivative(a, Lb)(*p) - lie_derivative(b, La)(*p)
    br = G.bracket(AlgebraVector.basis(a), AlgebraVector.basis(b))
    rhs = lie_derivative(br, poly_field)(*p) if np.any(br.coefficients) else 0
    assert abs(lhs - rhs) < 1e-6


def test_lie_halving_ratio():
    F = lambda x, y, b, r: np.exp(0.5 * x + 0.3 * b * r)
    p = (0.2, 0.1, 0.4, 1.1)
    exact_b = 1.1**2 * 0.3 * 1.1 * F(*p)
    errs = [abs(lie_derivative_apply("B", F, p, steps={"b": h}) - exact_b) for h in (1e-2, 5e-3)]
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)


def test_lie_rejects_nonpositive_r():
    with pytest.raises(ValueError):
        lie_derivative_apply("X", poly_field, (0, 0, 0, 0))
