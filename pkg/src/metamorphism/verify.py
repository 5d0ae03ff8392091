"""Self-check suites used by ``metamorphism verify``.

Each suite returns a list of :class:`Check` records.  Random sweeps draw
from ``numpy.random.default_rng(seed)`` so a report is reproducible from
the seed stored in it.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import product

import numpy as np

from . import group as G
from .fiducial import FiducialSpec, airy_type, annihilation_residual, from_spec, gaussian, generic_type
from .image_space import (
    cauchy_riemann_residuals,
    characterize,
    parabolic_residual,
    structural_residuals,
    to_complex_chart,
    transform_stack,
)
from .representations import derived_rep_apply, schrodinger_apply, schrodinger_apply_sampled
from .signals import (
    Context,
    MeasureSpec,
    PolyGaussChirp,
    hermite,
    inner_product,
    partial_fourier,
    sample,
)
from .transform import (
    contravariant,
    covariant_direct,
    covariant_fast,
    intertwining_residual,
    metamorphism,
    orthogonality_defect,
)

SUITES = ("group", "signals", "representations", "fiducial", "metamorph")
DEFAULT_SEED = 20240601


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    comparison: str = "<"

    @classmethod
    def below(cls, name, value, tol):
        value = float(value)
        return cls(name, value, tol, bool(value < tol), "<")

    @classmethod
    def above(cls, name, value, tol):
        value = float(value)
        return cls(name, value, tol, bool(value > tol), ">")


def random_element(rng, box: float = 5.0, r_range=(0.1, 10.0)) -> G.GroupElement:
    s, x, y, b = rng.uniform(-box, box, 4)
    r = math.exp(rng.uniform(math.log(r_range[0]), math.log(r_range[1])))
    return G.GroupElement(s, x, y, b, r)


def scaled_error(a, b) -> float:
    """Largest ``|a - b| / max(1, |b|)`` componentwise."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def poly_gap(f: PolyGaussChirp, g: PolyGaussChirp) -> float:
    """Coefficient-level distance between two members of the exact family."""
    if f.is_zero() and g.is_zero():
        return 0.0
    if f.is_zero() or g.is_zero():
        nz = g if f.is_zero() else f
        return float(np.max(np.abs(nz.poly)))
    if not f.same_exponent(g):
        return math.inf
    d = f - g
    return 0.0 if d.is_zero() else float(np.max(np.abs(d.poly)))


def group_checks(rng, samples: int = 1000) -> list[Check]:
    assoc = hom = inv = modular = 0.0
    for _ in range(samples):
        g1, g2, g3 = random_element(rng), random_element(rng), random_element(rng)
        assoc = max(assoc, scaled_error(((g1 * g2) * g3).as_array(), (g1 * (g2 * g3)).as_array()))
        prod = G.to_matrix(g1) @ G.to_matrix(g2)
        hom = max(hom, scaled_error((g1 * g2).as_array(), G.from_matrix(prod).as_array()))
        hom = max(hom, scaled_error(G.to_matrix(g1 * g2), prod))
        inv = max(inv, scaled_error(G.to_matrix(G.inverse(g1)), np.linalg.inv(G.to_matrix(g1))))
        modular = max(modular, abs(G.modular(g1 * g2) - G.modular(g1) * G.modular(g2)) / G.modular(g1 * g2))
    table = 0.0
    for a, b in product(G.BASIS, repeat=2):
        ma, mb = G.generator_matrix(a), G.generator_matrix(b)
        lhs = ma @ mb - mb @ ma
        rhs = G.algebra_matrix(G.bracket(G.AlgebraVector.basis(a), G.AlgebraVector.basis(b)))
        table = max(table, float(np.max(np.abs(lhs - rhs))))
    jac = left_density_invariance(rng)
    return [
        Check.below("associativity", assoc, 1e-12),
        Check.below("matrix_homomorphism", hom, 1e-12),
        Check.below("inverse_vs_matrix_inverse", inv, 1e-10),
        Check.below("modular_multiplicative", modular, 1e-14),
        Check.below("commutator_table_vs_matrices", table, 1e-15),
        Check.below("left_density_invariance", jac, 1e-10),
    ]


def left_density_invariance(rng, trials: int = 10, step: float = 1e-5) -> float:
    """Jacobian of ``h -> g0 h`` against the ratio of left densities (central differences)."""
    worst = 0.0
    for _ in range(trials):
        g0 = random_element(rng, 1.0, (0.5, 2.0))
        h = random_element(rng, 1.0, (0.5, 2.0))
        base = np.array(h.as_array())
        jac = np.empty((5, 5))
        for k in range(5):
            e = np.zeros(5)
            e[k] = step
            hi = np.array((g0 * G.GroupElement.from_array(base + e)).as_array())
            lo = np.array((g0 * G.GroupElement.from_array(base - e)).as_array())
            jac[:, k] = (hi - lo) / (2 * step)
        expected = G.measures(h)[0] / G.measures(g0 * h)[0]
        worst = max(worst, abs(abs(np.linalg.det(jac)) - expected) / expected)
    return worst


def signal_checks(rng) -> list[Check]:
    gram = np.array([[inner_product(hermite(m), hermite(n)) for n in range(7)] for m in range(7)])
    ctx = Context()
    grid = ctx.grid()
    quad = 0.0
    for m, n in product(range(5), repeat=2):
        exact = inner_product(hermite(m), hermite(n))
        quad = max(quad, abs(inner_product(sample(hermite(m), grid), sample(hermite(n), grid)) - exact))
    g = gaussian(ctx)
    x_grid, spec = partial_fourier(sample(g, grid).values[None, :], grid, ctx.hbar)
    xs = x_grid.points
    fourier = float(np.max(np.abs(spec[0] - g(xs))))
    return [
        Check.below("hermite_orthonormal_exact", np.max(np.abs(gram - np.eye(7))), 1e-12),
        Check.below("quadrature_vs_exact_inner_product", quad, 1e-10),
        Check.below("gaussian_fourier_self_dual", fourier, 1e-12),
    ]


def representation_checks(rng, trials: int = 100) -> list[Check]:
    ctx = Context()
    comm = 0.0
    for n in range(5):
        f = hermite(n)
        for a, b in product(G.BASIS, repeat=2):
            va, vb = G.AlgebraVector.basis(a), G.AlgebraVector.basis(b)
            lhs = derived_rep_apply(va, derived_rep_apply(vb, f, ctx), ctx) - derived_rep_apply(
                vb, derived_rep_apply(va, f, ctx), ctx
            )
            comm = max(comm, poly_gap(lhs, derived_rep_apply(G.bracket(va, vb), f, ctx)))
    quadratic = 0.0
    for n in range(7):
        f = hermite(n)
        d = lambda name, h: derived_rep_apply(name, h, ctx)
        q1 = d("X", d("X", f)) + 2 * d("S", d("B", f))
        q2 = d("X", d("Y", f)) + d("Y", d("X", f)) + 2 * d("S", d("R", f))
        quadratic = max(quadratic, q1.norm(), q2.norm())
    unit = 0.0
    sampled = 0.0
    grid = ctx.grid()
    for i in range(trials):
        g = random_element(rng, 1.0, (0.5, 2.0))
        f = hermite(i % 5)
        unit = max(unit, abs(schrodinger_apply(g, f, ctx).norm() - 1.0))
        if i < 10:
            exact = sample(schrodinger_apply(g, hermite(2), ctx), grid).values
            approx = schrodinger_apply_sampled(g, sample(hermite(2), grid), ctx).values
            sampled = max(sampled, float(np.max(np.abs(exact - approx))))
    gauss = gaussian(ctx)
    heis = derived_rep_apply(G.AlgebraVector([0, -1, 1j, 0, 0]), gauss, ctx)
    aff = derived_rep_apply(G.AlgebraVector([1j / (4 * np.pi * ctx.hbar), 0, 0, 2j, 1]), gauss, ctx)
    return [
        Check.below("derived_commutators", comm, 1e-12),
        Check.below("quadratic_identities", quadratic, 1e-12),
        Check.below("unitarity", unit, 1e-10),
        Check.below("sampled_vs_exact_action", sampled, 1e-8),
        Check.below("gaussian_heisenberg_annihilation", poly_gap(heis, 0 * gauss), 1e-12),
        Check.below("gaussian_affine_annihilation", poly_gap(aff, 0 * gauss), 1e-12),
    ]


FIDUCIAL_SPECS = (
    FiducialSpec(0.0, -1.0, 1.0, 0.0, 0.0),
    FiducialSpec(0.0, -1.0, 1.0, 1.0, 0.0),
    FiducialSpec(0.3, -2.0, 0.5, -0.7, 0.0),
    FiducialSpec(1.0 / (4 * np.pi), 0.0, 0.0, 2.0, 1.0),
    FiducialSpec(0.1, 0.2, 0.3, 2.0, 1.0),
    FiducialSpec(3.0 / (4 * np.pi), 0.0, 0.0, 1.0, 1.0),
    FiducialSpec(-0.4, 1.5, -0.8, -3.0, -2.0),
)


def fiducial_checks(rng) -> list[Check]:
    ctx = Context(n=1024, half_width=12.0)
    grid = ctx.grid()
    unit = resid = 0.0
    for spec in FIDUCIAL_SPECS:
        phi = from_spec(spec, ctx)
        unit = max(unit, abs(phi.norm() - 1.0))
        resid = max(resid, annihilation_residual(spec, phi, ctx))
    g = sample(gaussian(ctx), grid).values
    airy = airy_type(FIDUCIAL_SPECS[0], ctx).values
    gen = generic_type(FIDUCIAL_SPECS[3], ctx).values
    return [
        Check.below("unit_norm", unit, 1e-10),
        Check.below("own_annihilation_residual", resid, 1e-7),
        Check.below("cubic_family_reduces_to_gaussian", np.max(np.abs(airy - g)), 1e-9),
        Check.below("power_family_reduces_to_gaussian", np.max(np.abs(gen - g)), 1e-9),
    ]


SLICES = ((0.0, 1.0), (0.5, 0.7), (-1.0, 2.0))


def metamorph_checks(rng, intertwining_elements: int = 20, points: int = 50) -> list[Check]:
    ctx = Context()
    phi = gaussian(ctx)
    grid = ctx.grid()
    diff = iso = 0.0
    for n, (b, r) in product(range(5), SLICES):
        fast = covariant_fast(hermite(n), phi, b, r, ctx).field
        direct = covariant_direct(hermite(n), phi, fast.x_grid, fast.y_grid, b, r, ctx).field
        diff = max(diff, float(np.max(np.abs(fast.values - direct.values))))
        iso = max(iso, abs(fast.norm() - 1.0))
    paper = covariant_fast(phi, phi, 0.0, 1.0, ctx).field.norm(paper_weight=True) ** 2

    roundtrip = 0.0
    for n in range(5):
        f = hermite(n)
        back = contravariant(metamorphism(f, ctx=ctx), phi, MeasureSpec.dirac(0.0, 1.0), ctx)
        roundtrip = max(roundtrip, (back - sample(f, grid)).norm())

    ortho = 0.0
    dirac = MeasureSpec.dirac(0.0, 1.0)
    for m, n in product(range(3), repeat=2):
        ortho = max(ortho, orthogonality_defect(hermite(m), hermite(n), phi, phi, dirac, ctx))

    inter = 0.0
    pts = np.column_stack(
        [rng.uniform(-1.5, 1.5, points), rng.uniform(-1.5, 1.5, points), rng.uniform(-1, 1, points), rng.uniform(0.5, 2, points)]
    )
    for _ in range(intertwining_elements):
        g = random_element(rng, 1.0, (0.5, 2.0))
        inter = max(inter, intertwining_residual(g, hermite(1), phi, pts, ctx))

    res = {}
    for h in (1e-3, 5e-4):
        st = transform_stack(hermite(3), phi, 0.0, 1.0, h, h, ctx)
        c1, c2 = cauchy_riemann_residuals(st)
        s1, s2 = structural_residuals(st)
        res[h] = dict(c1=c1, c2=c2, s1=s1, s2=s2, p=parabolic_residual(to_complex_chart(st)))
    full, half = res[1e-3], res[5e-4]
    ratio = min(full[k] / half[k] for k in ("c2", "s1", "s2", "p")), max(full[k] / half[k] for k in ("c2", "s1", "s2", "p"))
    airy = from_spec(FiducialSpec(0.0, -1.0, 1.0, 1.0, 0.0), ctx)
    neg = transform_stack(hermite(0), airy, 0.0, 1.0, 1e-3, 1e-3, ctx)
    nc1, _ = cauchy_riemann_residuals(neg)
    ns1, ns2 = structural_residuals(neg)

    good = characterize(lambda b, r: covariant_fast(hermite(1), phi, b, r, ctx), phi, ctx=ctx)
    rec = (good.signal - sample(hermite(1), grid)).norm() if good.accepted else math.inf

    def x_times(b, r):
        fld = metamorphism(phi, b, r, ctx).field
        return fld.with_values(fld.mesh()[0] * fld.values)

    bad = characterize(x_times, phi, ctx=ctx)
    return [
        Check.below("fast_vs_direct", diff, 1e-8),
        Check.below("isometry_default_weight", iso, 1e-7),
        Check.below("paper_weight_factor", abs(paper - 2 ** -0.5), 1e-10),
        Check.below("round_trip", roundtrip, 1e-5),
        Check.below("orthogonality", ortho, 1e-7),
        Check.below("intertwining", inter, 1e-6),
        Check.below("c1", full["c1"], 1e-6),
        Check.below("c2", full["c2"], 1e-4),
        Check.below("s1", full["s1"], 1e-4),
        Check.below("s2", full["s2"], 1e-4),
        Check.below("parabolic", full["p"], 1e-3),
        Check.above("halving_ratio_min", ratio[0], 3.0),
        Check.below("halving_ratio_max", ratio[1], 5.0),
        Check.above("negative_control_c1", nc1, 1e-2),
        Check.below("negative_control_s1", ns1, 1e-4),
        Check.below("negative_control_s2", ns2, 1e-4),
        Check.below("characterize_accepts_image", rec, 1e-5),
        Check.below("characterize_rejects_x_multiple", 0.0 if not bad.accepted else 1.0, 0.5),
    ]


RUNNERS = {
    "group": group_checks,
    "signals": signal_checks,
    "representations": representation_checks,
    "fiducial": fiducial_checks,
    "metamorph": metamorph_checks,
}


def run_suites(names, seed: int = DEFAULT_SEED) -> dict:
    """Run the named suites with one seeded generator; returns a JSON-ready report."""
    if isinstance(names, str):
        names = [names]
    names = list(SUITES) if list(names) == ["all"] else list(names)
    unknown = [n for n in names if n not in RUNNERS]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; expected 'all' or any of {SUITES}")
    rng = np.random.default_rng(seed)
    suites = {}
    for name in names:
        checks = RUNNERS[name](rng)
        suites[name] = {
            "passed": all(c.passed for c in checks),
            "checks": [asdict(c) for c in checks],
        }
    return {"seed": int(seed), "passed": all(s["passed"] for s in suites.values()), "suites": suites}
