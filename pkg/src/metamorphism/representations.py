"""Schrodinger-type and quasi-regular representations of the SSR group.

The Schrodinger-type representation acts on functions of one variable,

    [rho(s, x, y, b, r) f](u) = sqrt(r) e^{2 pi i hbar (s + x (u - y) - b (u - y)^2 / 2)} f(r (u - y)),

and the quasi-regular representation acts on functions of ``(x, y, b, r)``.
The induced character exponent is fixed to ``lambda = 0``.
"""
from __future__ import annotations

from typing import Callable, Union

import numpy as np

from .group import BASIS, AlgebraVector, GroupElement, exp_one_param
from .signals import (
    Context,
    PolyGaussChirp,
    SampledSignal,
    UniformGrid1D,
    WindowOverflowError,
    sample,
)

Evaluator = Callable[..., complex]

DEFAULT_STEPS = {"x": 1e-4, "y": 1e-4, "b": 1e-3, "r": 1e-3}

_SUPPORT_CUTOFF = 1e-12


def _ctx(ctx: Context | None) -> Context:
    return Context() if ctx is None else ctx


def schrodinger_apply(g: GroupElement, f: PolyGaussChirp, ctx: Context | None = None) -> PolyGaussChirp:
    """Exact action on the polynomial-Gaussian-chirp family."""
    hbar = _ctx(ctx).hbar
    s, x, y, b, r = g.s, g.x, g.y, g.b, g.r
    # exponent in v = u - y before the shift
    a = f.alpha * r**2 + 1j * hbar * b
    lin = f.beta * r - 1j * hbar * x
    const = f.gamma - 2j * hbar * s
    poly = np.sqrt(r) * np.polynomial.Polynomial(f.poly)(np.polynomial.Polynomial([-r * y, r])).coef
    return PolyGaussChirp(poly, a, lin - a * y, const - 2 * lin * y + a * y**2)


def _support(f: SampledSignal) -> tuple[float, float] | None:
    mag = np.abs(f.values)
    top = mag.max()
    if top == 0:
        return None
    idx = np.flatnonzero(mag > _SUPPORT_CUTOFF * top)
    pts = f.grid.points
    return pts[idx[0]], pts[idx[-1]]


def schrodinger_apply_sampled(g: GroupElement, f: SampledSignal, ctx: Context | None = None) -> SampledSignal:
    """Same action on samples; shift and dilation use band-limited interpolation.

    Raises :class:`WindowOverflowError` when the transformed support leaves the window.
    """
    hbar = _ctx(ctx).hbar
    grid = f.grid
    support = _support(f)
    if support is not None:
        lo, hi = g.y + support[0] / g.r, g.y + support[1] / g.r
        if lo < grid.start - 0.5 * grid.step or hi > grid.stop + 0.5 * grid.step:
            raise WindowOverflowError(
                f"support [{lo:.4g}, {hi:.4g}] of the transformed signal leaves the window "
                f"[{grid.start:.4g}, {grid.stop:.4g}]"
            )
    v = grid.points - g.y
    phase = np.exp(2j * np.pi * hbar * (g.s + g.x * v - 0.5 * g.b * v**2))
    return SampledSignal(grid, np.sqrt(g.r) * phase * f(g.r * v))


def apply(g: GroupElement, f, ctx: Context | None = None):
    if isinstance(f, PolyGaussChirp):
        return schrodinger_apply(g, f, ctx)
    return schrodinger_apply_sampled(g, f, ctx)


def quasi_regular_point(g: GroupElement, F: Evaluator, point, ctx: Context | None = None) -> complex:
    """``[rho~(g) F](point)`` for the quasi-regular representation on ``(x, y, b, r)``."""
    hbar = _ctx(ctx).hbar
    x1, y1, b1, r1 = point
    s, x, y, b, r = g.s, g.x, g.y, g.b, g.r
    dy = y1 - y
    phase = np.exp(2j * np.pi * hbar * (s + x * dy - 0.5 * b * dy**2))
    return phase * F((x1 - x) / r + b * dy / r, r * dy, (b1 - b) / r**2, r1 / r)


def _basis_action(name: str, f: PolyGaussChirp, hbar: float) -> PolyGaussChirp:
    if name == "S":
        return (2j * np.pi * hbar) * f
    if name == "X":
        return f.times_poly([0.0, 2j * np.pi * hbar])
    if name == "B":
        return f.times_poly([0.0, 0.0, -1j * np.pi * hbar])
    if name == "Y":
        return -f.derivative()
    if name == "R":
        return 0.5 * f + f.derivative().times_poly([0.0, 1.0])
    raise ValueError(f"unknown basis element {name!r}")


def derived_rep_apply(a: AlgebraVector | str, f: PolyGaussChirp, ctx: Context | None = None) -> PolyGaussChirp:
    """Derived representation of a (complexified) algebra element, exact on the family."""
    hbar = _ctx(ctx).hbar
    if isinstance(a, str):
        a = AlgebraVector.basis(a)
    out = 0.0 * f
    for name, c in zip(BASIS, a.coefficients):
        if c != 0:
            out = out + c * _basis_action(name, f, hbar)
    return out


def derived_rep_numeric(
    basis: str,
    f: PolyGaussChirp,
    t_step: float,
    ctx: Context | None = None,
    grid: UniformGrid1D | None = None,
) -> SampledSignal:
    """Central difference of ``t -> rho(exp(tV)) f`` at ``t = 0``, sampled on ``grid``."""
    if not t_step > 0:
        raise ValueError(f"t_step must be positive, got {t_step}")
    ctx = _ctx(ctx)
    grid = ctx.grid() if grid is None else grid
    plus = sample(schrodinger_apply(exp_one_param(basis, t_step), f, ctx), grid)
    minus = sample(schrodinger_apply(exp_one_param(basis, -t_step), f, ctx), grid)
    return SampledSignal(grid, (plus.values - minus.values) / (2 * t_step))


def _partial(F: Evaluator, point, axis: int, h: float):
    lo = list(point)
    hi = list(point)
    lo[axis] = lo[axis] - h
    hi[axis] = hi[axis] + h
    return (F(*hi) - F(*lo)) / (2 * h)


def lie_derivative(
    basis: Union[str, AlgebraVector],
    F: Evaluator,
    ctx: Context | None = None,
    steps: dict | None = None,
) -> Evaluator:
    """Lie derivative of ``F(x, y, b, r)`` as a new evaluator (central differences).

    ``steps['r']`` is relative: the ``r`` step at a point is ``steps['r'] * r``.
    """
    hbar = _ctx(ctx).hbar
    st = dict(DEFAULT_STEPS)
    if steps:
        st.update(steps)

    if isinstance(basis, AlgebraVector):
        terms = [(name, c) for name, c in zip(BASIS, basis.coefficients) if c != 0]
        parts = [(c, lie_derivative(name, F, ctx, st)) for name, c in terms]

        def combo(x, y, b, r):
            total = 0j
            for c, op in parts:
                total = total + c * op(x, y, b, r)
            return total

        return combo

    if basis == "S":
        return lambda x, y, b, r: -2j * np.pi * hbar * F(x, y, b, r)
    if basis == "X":
        return lambda x, y, b, r: r * _partial(F, (x, y, b, r), 0, st["x"])
    if basis == "B":
        return lambda x, y, b, r: r**2 * _partial(F, (x, y, b, r), 2, st["b"])
    if basis == "R":
        return lambda x, y, b, r: r * _partial(F, (x, y, b, r), 3, st["r"] * r)
    if basis == "Y":

        def ly(x, y, b, r):
            p = (x, y, b, r)
            fx = _partial(F, p, 0, st["x"])
            fy = _partial(F, p, 1, st["y"])
            return (-2j * np.pi * hbar * x * F(x, y, b, r) - b * fx + fy) / r

        return ly
    raise ValueError(f"unknown basis element {basis!r}")


def lie_derivative_apply(
    basis: Union[str, AlgebraVector],
    F: Evaluator,
    point,
    ctx: Context | None = None,
    steps: dict | None = None,
) -> complex:
    x, y, b, r = point
    if not r > 0:
        raise ValueError(f"r must be strictly positive, got {r}")
    return complex(lie_derivative(basis, F, ctx, steps)(x, y, b, r))
