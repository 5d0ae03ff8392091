"""Covariant (metamorphism) transform, its inverse and consistency checks.

For a fiducial vector ``phi`` the transform on a slice ``(b, r)`` is

    W f(x, y) = sqrt(r) int f(u) e^{-2 pi i hbar (x (u - y) - b (u - y)^2 / 2)} conj(phi(r (u - y))) du.

:func:`covariant_direct` evaluates this integral point by point with the
rectangle rule; :func:`covariant_fast` factors it into dilation, shear,
chirp multiplication, partial Fourier transform and modulation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fiducial import gaussian
from .group import GroupElement
from .representations import apply
from .signals import (
    ComplexField2D,
    Context,
    GridMismatchError,
    MeasureSpec,
    PolyGaussChirp,
    SampledSignal,
    UniformGrid1D,
    WindowOverflowError,
    as_slice_list,
    find_slice,
    inner_product,
    inverse_partial_fourier,
    partial_fourier,
    sample,
    slice_inner_product,
)

EDGE_TOLERANCE = 1e-10
_POINT_CHUNK = 256


def _ctx(ctx):
    return Context() if ctx is None else ctx


@dataclass(frozen=True, eq=False)
class TransformResult:
    field: ComplexField2D
    fiducial: str = "unspecified"

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def x_grid(self) -> UniformGrid1D:
        return self.field.x_grid

    @property
    def y_grid(self) -> UniformGrid1D:
        return self.field.y_grid

    @property
    def b(self) -> float:
        return self.field.b

    @property
    def r(self) -> float:
        return self.field.r

    @property
    def hbar(self) -> float:
        return self.field.hbar

    def norm(self, paper_weight: bool = False) -> float:
        return self.field.norm(paper_weight)


def describe(phi) -> str:
    if isinstance(phi, PolyGaussChirp):
        if phi.degree == 0 and phi.beta == 0 and phi.alpha.imag == 0:
            return f"gaussian(alpha={phi.alpha.real:.17g})"
        return f"poly_gauss_chirp(degree={phi.degree})"
    return f"samples(count={phi.grid.count}, step={phi.grid.step:.17g})"


def _support_half(phi) -> float:
    if isinstance(phi, PolyGaussChirp):
        centre, half = phi.envelope()
        return abs(centre) + half
    mag = np.abs(phi.values)
    idx = np.flatnonzero(mag > 1e-16 * mag.max()) if mag.max() > 0 else np.array([0])
    pts = phi.grid.points[idx]
    return float(max(abs(pts[0]), abs(pts[-1])))


def _bandwidth(phi) -> float:
    if isinstance(phi, PolyGaussChirp):
        return phi.bandwidth()
    return 0.5 / phi.grid.step


def quadrature_grid(f, phi, xs, ys, bs, rs, ctx: Context | None = None) -> UniformGrid1D:
    """Rectangle-rule grid for the direct transform.

    A sampled ``f`` fixes the grid.  For an exact ``f`` the default window is
    widened to cover the envelope of ``f`` and the step is halved until the
    integrand's bandwidth is resolved.
    """
    ctx = _ctx(ctx)
    if isinstance(f, SampledSignal):
        return f.grid
    base = ctx.grid()
    centre, half = f.envelope()
    reach_f = abs(centre) + half
    half_width = max(ctx.half_width, reach_f)
    xs, ys, bs, rs = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (xs, ys, bs, rs))
    phi_half = _support_half(phi)
    reach = min(reach_f + np.abs(ys).max(), phi_half / rs.min())
    fmax = (
        f.bandwidth()
        + ctx.hbar * np.abs(xs).max()
        + ctx.hbar * np.abs(bs).max() * reach
        + rs.max() * _bandwidth(phi)
    )
    step = base.step
    while step > 0.5 / fmax:
        step /= 2
    count = int(math.ceil(2 * half_width / step))
    count += count % 2
    return UniformGrid1D(-0.5 * count * step, step, count)


def _conj_fiducial_on(phi, r: float, diffs: np.ndarray) -> np.ndarray:
    """``conj(phi(r * d))`` for an array of differences ``d``."""
    if isinstance(phi, PolyGaussChirp) or diffs.size <= 4096:
        return np.conj(phi(r * diffs))
    quantised = np.round(diffs, 12)
    uniq, inverse = np.unique(quantised, return_inverse=True)
    return np.conj(phi(r * uniq))[inverse].reshape(diffs.shape)


def _check_edges(integrand: np.ndarray):
    mag = np.abs(integrand)
    top = mag.max()
    if top == 0:
        return
    edge = max(mag[..., 0].max(), mag[..., -1].max())
    if edge > EDGE_TOLERANCE * top:
        raise WindowOverflowError(
            f"integrand is {edge / top:.2e} of its peak at the quadrature window edge; widen the window"
        )


def covariant_direct(
    f,
    phi,
    x_grid: UniformGrid1D,
    y_grid: UniformGrid1D,
    b: float,
    r: float,
    ctx: Context | None = None,
    quad_grid: UniformGrid1D | None = None,
) -> TransformResult:
    """Rectangle-rule quadrature of the transform at every ``(x, y)`` of the grids."""
    ctx = _ctx(ctx)
    if not r > 0:
        raise ValueError(f"r must be strictly positive, got {r}")
    hbar = ctx.hbar
    xs, ys = x_grid.points, y_grid.points
    quad = quad_grid or quadrature_grid(f, phi, xs, ys, b, r, ctx)
    u = quad.points
    fu = sample(f, quad).values
    d = u[None, :] - ys[:, None]
    integrand = math.sqrt(r) * fu[None, :] * _conj_fiducial_on(phi, r, d) * np.exp(1j * np.pi * hbar * b * d**2)
    _check_edges(integrand)
    kernel = np.exp(-2j * np.pi * hbar * np.outer(u, xs))
    values = quad.step * (integrand @ kernel) * np.exp(2j * np.pi * hbar * np.outer(ys, xs))
    return TransformResult(ComplexField2D(x_grid, y_grid, values, b, r, hbar), describe(phi))


def covariant_points(f, phi, points, ctx: Context | None = None, quad_grid: UniformGrid1D | None = None) -> np.ndarray:
    """Direct quadrature at arbitrary ``(x, y, b, r)`` points; returns a complex array."""
    ctx = _ctx(ctx)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 4:
        raise ValueError("points must have shape (m, 4) for (x, y, b, r)")
    if np.any(pts[:, 3] <= 0):
        raise ValueError("r must be strictly positive at every point")
    hbar = ctx.hbar
    x, y, b, r = pts.T
    quad = quad_grid or quadrature_grid(f, phi, x, y, b, r, ctx)
    u = quad.points
    fu = sample(f, quad).values
    out = np.empty(len(pts), dtype=complex)
    for lo in range(0, len(pts), _POINT_CHUNK):
        sl = slice(lo, lo + _POINT_CHUNK)
        d = u[None, :] - y[sl, None]
        phase = np.exp(-2j * np.pi * hbar * (x[sl, None] * d - 0.5 * b[sl, None] * d**2))
        integrand = np.sqrt(r[sl, None]) * fu[None, :] * np.conj(phi(r[sl, None] * d)) * phase
        _check_edges(integrand)
        out[sl] = quad.step * integrand.sum(axis=1)
    return out


def _fiducial_lattice(phi, r: float, grid: UniformGrid1D) -> np.ndarray:
    """``sqrt(r) conj(phi(r k du))`` for ``k = -(N-1) .. N-1`` (step R of the pipeline)."""
    n = grid.count
    k = np.arange(-(n - 1), n)
    if isinstance(phi, SampledSignal):
        if not math.isclose(phi.grid.step, grid.step, rel_tol=1e-12):
            raise GridMismatchError(
                f"fiducial spacing {phi.grid.step} differs from signal spacing {grid.step}"
            )
        offset = -phi.grid.start / phi.grid.step
        if r == 1.0 and abs(offset - round(offset)) < 1e-9:
            idx = k + int(round(offset))
            vals = np.zeros(k.size, dtype=complex)
            ok = (idx >= 0) & (idx < phi.grid.count)
            vals[ok] = phi.values[idx[ok]]
            return np.conj(vals)
    return math.sqrt(r) * np.conj(phi(r * k * grid.step))


def covariant_fast(
    f,
    phi,
    b: float,
    r: float,
    ctx: Context | None = None,
    x_count: int | None = None,
) -> TransformResult:
    """Five-step pipeline on ``F(y, u) = f(y) conj(phi(u))``.

    The ``y`` grid equals the signal grid; the ``x`` grid is the centred dual
    grid of the 2N zero-padded FFT, cropped to ``x_count`` points (default N).
    """
    ctx = _ctx(ctx)
    if not r > 0:
        raise ValueError(f"r must be strictly positive, got {r}")
    hbar = ctx.hbar
    grid = f.grid if isinstance(f, SampledSignal) else ctx.grid()
    fv = sample(f, grid).values
    n = grid.count
    k = np.arange(-(n - 1), n) * grid.step
    # R: dilate the fiducial factor on the lattice of differences
    dilated = _fiducial_lattice(phi, r, grid)
    # M_b acts on the same lattice, so fold it in before the shear
    lattice = dilated * np.exp(1j * np.pi * hbar * b * k**2)
    # T: F(y, u) -> F(u, u - y) is the index map (i, j) -> j - i
    idx = np.arange(n)[None, :] - np.arange(n)[:, None] + (n - 1)
    sheared = fv[None, :] * lattice[idx]
    # F2: partial Fourier transform u -> x
    x_grid, spectrum = partial_fourier(sheared, grid, hbar, pad=2, x_count=n if x_count is None else x_count)
    # M: modulation by e^{2 pi i hbar x y}
    values = spectrum * np.exp(2j * np.pi * hbar * np.outer(grid.points, x_grid.points))
    return TransformResult(ComplexField2D(x_grid, grid, values, b, r, hbar), describe(phi))


def metamorphism(
    f,
    b: float = 0.0,
    r: float = 1.0,
    ctx: Context | None = None,
    x_grid: UniformGrid1D | None = None,
    y_grid: UniformGrid1D | None = None,
) -> TransformResult:
    """Covariant transform with the unit Gaussian fiducial.

    Uses the fast pipeline unless explicit output grids are requested.
    """
    ctx = _ctx(ctx)
    phi = gaussian(ctx)
    if x_grid is None and y_grid is None:
        return covariant_fast(f, phi, b, r, ctx)
    grid = ctx.grid()
    return covariant_direct(f, phi, x_grid or grid, y_grid or grid, b, r, ctx)


def contravariant(
    F,
    phi,
    measure: MeasureSpec | None = None,
    ctx: Context | None = None,
    u_grid: UniformGrid1D | None = None,
) -> SampledSignal:
    """Adjoint transform: integrate ``F`` against the coherent states ``rho(s(x, y, b, r)) phi``.

    ``F`` is a field, a transform result, a slice stack or a collection of
    slices; ``measure`` defaults to the Dirac measure at the only slice.
    """
    slices = as_slice_list(F)
    if measure is None:
        if len(slices) != 1:
            raise ValueError("a measure is required when more than one slice is supplied")
        measure = MeasureSpec.dirac(slices[0].b, slices[0].r)
    hbar = slices[0].hbar
    if ctx is not None and not math.isclose(ctx.hbar, hbar, rel_tol=1e-14):
        raise ValueError(f"context hbar {ctx.hbar} differs from the field's hbar {hbar}")
    u_grid = u_grid or slices[0].y_grid
    u = u_grid.points
    out = np.zeros(u_grid.count, dtype=complex)
    for b, r, weight in measure.atoms:
        if weight == 0:
            continue
        field = find_slice(slices, b, r)
        xs, ys = field.x_grid.points, field.y_grid.points
        demod = field.values * np.exp(-2j * np.pi * hbar * np.outer(ys, xs))
        partial = inverse_partial_fourier(demod, field.x_grid, u_grid, hbar)
        d = u[None, :] - ys[:, None]
        states = math.sqrt(r) * np.exp(-1j * np.pi * hbar * b * d**2) * np.conj(_conj_fiducial_on(phi, r, d))
        factor = weight * field.y_grid.step
        if measure.paper_weight:
            factor /= math.sqrt(2 * r)
        out += factor * np.sum(partial * states, axis=0)
    return SampledSignal(u_grid, out)


def quasi_regular_map(g: GroupElement, points, ctx: Context | None = None):
    """Vectorised quasi-regular action: phases and pulled-back points for ``rho~(g)``."""
    hbar = _ctx(ctx).hbar
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    x1, y1, b1, r1 = pts.T
    dy = y1 - g.y
    phase = np.exp(2j * np.pi * hbar * (g.s + g.x * dy - 0.5 * g.b * dy**2))
    mapped = np.column_stack(
        [(x1 - g.x) / g.r + g.b * dy / g.r, g.r * dy, (b1 - g.b) / g.r**2, r1 / g.r]
    )
    return phase, mapped


def intertwining_residual(g: GroupElement, f, phi, points, ctx: Context | None = None) -> float:
    """``max |W(rho(g) f) - rho~(g) W f|`` over the points, both sides by direct quadrature."""
    ctx = _ctx(ctx)
    lhs = covariant_points(apply(g, f, ctx), phi, points, ctx)
    phase, mapped = quasi_regular_map(g, points, ctx)
    rhs = phase * covariant_points(f, phi, mapped, ctx)
    return float(np.max(np.abs(lhs - rhs)))


def orthogonality_defect(f, g, phi, psi, measure: MeasureSpec, ctx: Context | None = None) -> float:
    """``|<W_phi f, W_psi g>_mu - <f, g> conj(<phi, psi>)|`` using the fast transform on each atom."""
    ctx = _ctx(ctx)
    wf = [covariant_fast(f, phi, b, r, ctx).field for b, r, _ in measure.atoms]
    wg = [covariant_fast(g, psi, b, r, ctx).field for b, r, _ in measure.atoms]
    lhs = slice_inner_product(wf, wg, measure)
    grid = ctx.grid()
    if isinstance(f, SampledSignal) or isinstance(g, SampledSignal):
        fg = inner_product(sample(f, grid), sample(g, grid))
    else:
        fg = inner_product(f, g)
    if isinstance(phi, SampledSignal) or isinstance(psi, SampledSignal):
        pp = inner_product(sample(phi, grid), sample(psi, grid))
    else:
        pp = inner_product(phi, psi)
    return float(abs(lhs - fg * np.conj(pp)))
