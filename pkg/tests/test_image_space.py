import numpy as np
import pytest

from metamorphism.fiducial import FiducialSpec, from_spec, gaussian
from metamorphism.image_space import (
    SliceStack,
    Tolerances,
    cauchy_riemann_residuals,
    characterize,
    edge_fraction,
    parabolic_residual,
    residual_report,
    structural_residuals,
    to_complex_chart,
    transform_stack,
)
from metamorphism.signals import ComplexField2D, Context, SampledSignal, UniformGrid1D, hermite, sample
from metamorphism.transform import covariant_fast, metamorphism

CTX = Context()
PHI = gaussian(CTX)
AIRY = from_spec(FiducialSpec(0, -1, 1, 1, 0), CTX)


@pytest.fixture(scope="module")
def h3_stacks():
    return [transform_stack(hermite(3), PHI, 0.0, 1.0, h, h) for h in (1e-3, 5e-4)]


def test_image_passes_cauchy_riemann(h3_stacks):
    (c1, c2), (_, c2_half) = (cauchy_riemann_residuals(s) for s in h3_stacks)
    assert c1 < 1e-6
    assert c2 < 1e-4
    assert c2 / c2_half == pytest.approx(4, abs=0.5)


def test_structural_on_hermite2():
    s1, s2 = structural_residuals(transform_stack(hermite(2), PHI, 0.3, 1.2))
    assert s1 < 1e-4 and s2 < 1e-4


def test_cubic_fiducial_negative_control():
    stack = transform_stack(hermite(0), AIRY)
    c1, _ = cauchy_riemann_residuals(stack)
    s1, s2 = structural_residuals(stack)
    assert c1 > 1e-2
    assert s1 < 1e-4 and s2 < 1e-4


def zero_stack():
    g = CTX.grid()
    z = np.zeros((g.count, g.count))
    mk = lambda b, r: ComplexField2D(g, g, z, b, r)
    return SliceStack.from_provider(mk)


def test_zero_field_residuals():
    st = zero_stack()
    assert cauchy_riemann_residuals(st) == (0.0, 0.0)
    assert structural_residuals(st) == (0.0, 0.0)
    assert parabolic_residual(to_complex_chart(st)) == 0.0


def test_x_times_image_fails_c1():
    def provider(b, r):
        fld = metamorphism(PHI, b, r).field
        return fld.with_values(fld.mesh()[0] * fld.values)

    c1, _ = cauchy_riemann_residuals(SliceStack.from_provider(provider))
    assert c1 > 0.1


def test_chart_coordinates():
    g = UniformGrid1D.from_points([0.0, 1.0])
    fld = ComplexField2D(g, g, np.ones((2, 2)), 0.0, 1.0)
    chart = to_complex_chart(fld)
    assert chart.w == 1j
    assert chart.z[0, 1] == 1  # (x, y) = (1, 0)
    assert chart.w.imag > 0


@pytest.mark.parametrize("b,r", [(0.0, 1.0), (-0.7, 0.6), (1.5, 2.0)])
def test_chart_inverts(b, r):
    fld = covariant_fast(hermite(1), PHI, b, r).field
    chart = to_complex_chart(fld)
    assert chart.w.imag == pytest.approx(r**2)
    assert np.max(np.abs(chart.field_values() - fld.values)) < 1e-12


def test_parabolic_convergence():
    res = [parabolic_residual(to_complex_chart(transform_stack(PHI, PHI, 0, 1, h, h))) for h in (1e-3, 5e-4)]
    assert res[0] < 1e-3
    assert res[0] / res[1] == pytest.approx(4, abs=0.5)


def test_parabolic_rejects_perturbation():
    chart = to_complex_chart(transform_stack(PHI, PHI))
    assert parabolic_residual(chart.perturbed(lambda z, w: z**2)) > 0.1


def test_parabolic_accepts_holomorphic_solution_perturbation():
    # adding f2 of another image keeps the equation satisfied
    base = transform_stack(PHI, PHI)
    other = transform_stack(hermite(2), PHI)
    summed = SliceStack(*(a.with_values(a.values + c.values) for a, c in zip(base.slices(), other.slices())),
                        base.h_b, base.h_r)
    assert parabolic_residual(to_complex_chart(summed)) < 1e-3


def test_parabolic_needs_stack():
    with pytest.raises(ValueError):
        parabolic_residual(to_complex_chart(metamorphism(PHI).field))


def test_stack_validates_positions():
    fld = metamorphism(PHI).field
    with pytest.raises(ValueError):
        SliceStack(fld, fld, fld, fld, fld, 1e-3, 1e-3)
    with pytest.raises(ValueError):
        SliceStack.from_provider(lambda b, r: metamorphism(PHI, b, r), r0=1e-3, h_r=1e-3)


def test_report_has_ratios():
    rep = residual_report(transform_stack(PHI, PHI), transform_stack(PHI, PHI, h_b=5e-4, h_r=5e-4))
    assert set(rep["halving_ratio"]) == {"c2", "s1", "s2", "parabolic"}
    assert rep["norms"]["default"] == pytest.approx(1.0)
    assert rep["norms"]["paper"] == pytest.approx(2**-0.25)


def test_edge_fraction():
    assert edge_fraction(metamorphism(PHI).field) < 1e-12


def test_characterize_accepts_image():
    res = characterize(lambda b, r: covariant_fast(hermite(1), PHI, b, r), PHI)
    assert res.accepted, res.reason
    assert (res.signal - sample(hermite(1), CTX.grid())).norm() < 1e-5


def test_characterize_accepts_off_centre_slice():
    res = characterize(lambda b, r: covariant_fast(hermite(2), PHI, b, r), PHI, b0=0.4, r0=0.8)
    assert res.accepted, res.reason


def test_characterize_rejects_x_multiple():
    def provider(b, r):
        fld = metamorphism(PHI, b, r).field
        return fld.with_values(fld.mesh()[0] * fld.values)

    res = characterize(provider, PHI)
    assert not res.accepted
    assert res.reason.startswith("C1")


def test_characterize_zero():
    g = CTX.grid()
    res = characterize(lambda b, r: ComplexField2D(g, g, np.zeros((g.count, g.count)), b, r), PHI)
    assert res.accepted
    assert not np.any(res.signal.values)


def test_characterize_rejects_cubic_fiducial_data():
    res = characterize(lambda b, r: covariant_fast(hermite(0), AIRY, b, r), PHI)
    assert not res.accepted and "C1" in res.reason


def test_characterize_square_integrability_gate():
    # an edge tolerance no sampled field can meet forces the integrability verdict
    strict = Tolerances(edge=0.0)
    res = characterize(lambda b, r: covariant_fast(hermite(0), PHI, b, r), PHI, tolerances=strict)
    assert not res.accepted and "square integrable" in res.reason


def test_residual_implication():
    # when c1, c2 and s1 pass, s2 passes as well
    rng = np.random.default_rng(7)
    grid = CTX.grid()
    premise_met = 0
    for _ in range(4):
        coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
        vals = sum(c * hermite(n)(grid.points) for n, c in enumerate(coeffs))
        f = SampledSignal(grid, vals)
        b0, r0 = rng.uniform(-1, 1), rng.uniform(0.6, 1.8)
        st = transform_stack(f, PHI, b0, r0)
        c1, c2 = cauchy_riemann_residuals(st)
        s1, s2 = structural_residuals(st)
        if c1 < 1e-6 and c2 < 1e-4 and s1 < 1e-4:
            premise_met += 1
            assert s2 < 1e-4
    assert premise_met > 0
