"""Analyzers for the image space of the covariant transform.

Residuals are evaluated on a five-slice stencil around a reference slice
``(b0, r0)``: derivatives in ``x`` and ``y`` are spectral on each slice,
derivatives in ``b`` and ``r`` are central differences across slices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .signals import (
    ComplexField2D,
    Context,
    GridMismatchError,
    MeasureSpec,
    SampledSignal,
    spectral_derivative,
)
from .transform import TransformResult, contravariant, covariant_fast

SliceProvider = Callable[[float, float], "ComplexField2D | TransformResult"]


def _as_field(obj) -> ComplexField2D:
    return obj.field if isinstance(obj, TransformResult) else obj


@dataclass(frozen=True, eq=False)
class SliceStack:
    """Reference slice plus its neighbours at ``b0 +- h_b`` and ``r0 +- h_r``."""

    center: ComplexField2D
    b_plus: ComplexField2D
    b_minus: ComplexField2D
    r_plus: ComplexField2D
    r_minus: ComplexField2D
    h_b: float
    h_r: float

    def __post_init__(self):
        if not (self.h_b > 0 and self.h_r > 0):
            raise ValueError("stencil steps must be positive")
        for name in ("b_plus", "b_minus", "r_plus", "r_minus"):
            s = getattr(self, name)
            if not self.center.same_layout(s):
                raise GridMismatchError(f"slice {name} does not share the reference grids")
        c = self.center
        expected = {
            "b_plus": (c.b + self.h_b, c.r),
            "b_minus": (c.b - self.h_b, c.r),
            "r_plus": (c.b, c.r + self.h_r),
            "r_minus": (c.b, c.r - self.h_r),
        }
        for name, (b, r) in expected.items():
            s = getattr(self, name)
            if not (math.isclose(s.b, b, abs_tol=1e-12) and math.isclose(s.r, r, rel_tol=1e-12)):
                raise ValueError(f"slice {name} sits at ({s.b}, {s.r}), expected ({b}, {r})")

    @classmethod
    def from_provider(
        cls, provider: SliceProvider, b0: float = 0.0, r0: float = 1.0, h_b: float = 1e-3, h_r: float = 1e-3
    ) -> "SliceStack":
        if not r0 - h_r > 0:
            raise ValueError("r0 - h_r must stay positive")
        return cls(
            _as_field(provider(b0, r0)),
            _as_field(provider(b0 + h_b, r0)),
            _as_field(provider(b0 - h_b, r0)),
            _as_field(provider(b0, r0 + h_r)),
            _as_field(provider(b0, r0 - h_r)),
            h_b,
            h_r,
        )

    @property
    def b0(self) -> float:
        return self.center.b

    @property
    def r0(self) -> float:
        return self.center.r

    @property
    def hbar(self) -> float:
        return self.center.hbar

    def slices(self) -> list[ComplexField2D]:
        return [self.center, self.b_plus, self.b_minus, self.r_plus, self.r_minus]

    def map(self, fn: Callable[[ComplexField2D], np.ndarray]) -> "SliceStack":
        """New stack whose slice values are ``fn(slice)``."""
        return SliceStack(*(s.with_values(fn(s)) for s in self.slices()), self.h_b, self.h_r)


def transform_stack(f, phi, b0: float = 0.0, r0: float = 1.0, h_b: float = 1e-3, h_r: float = 1e-3,
                    ctx: Context | None = None) -> SliceStack:
    return SliceStack.from_provider(lambda b, r: covariant_fast(f, phi, b, r, ctx), b0, r0, h_b, h_r)


@dataclass
class _Derivatives:
    F: np.ndarray
    Fx: np.ndarray
    Fy: np.ndarray
    Fxx: np.ndarray
    Fxy: np.ndarray
    Fb: np.ndarray
    Fr: np.ndarray
    x: np.ndarray
    y: np.ndarray


def _derivatives(stack: SliceStack) -> _Derivatives:
    c = stack.center
    F = c.values
    dx, dy = c.x_grid.step, c.y_grid.step
    Fx = spectral_derivative(F, dx, axis=1)
    x, y = c.mesh()
    return _Derivatives(
        F=F,
        Fx=Fx,
        Fy=spectral_derivative(F, dy, axis=0),
        Fxx=spectral_derivative(F, dx, axis=1, order=2),
        Fxy=spectral_derivative(Fx, dy, axis=0),
        Fb=(stack.b_plus.values - stack.b_minus.values) / (2 * stack.h_b),
        Fr=(stack.r_plus.values - stack.r_minus.values) / (2 * stack.h_r),
        x=x,
        y=y,
    )


def _relative(residual: np.ndarray, reference: np.ndarray) -> float:
    top = np.linalg.norm(reference)
    res = np.linalg.norm(residual)
    if top == 0:
        return 0.0 if res == 0 else math.inf
    return float(res / top)


def cauchy_riemann_residuals(stack: SliceStack) -> tuple[float, float]:
    """Relative residuals of the first and second Cauchy-Riemann type operators."""
    d = _derivatives(stack)
    b, r, hbar = stack.b0, stack.r0, stack.hbar
    c1 = ((r**2 - 1j * b) * d.Fx + 1j * d.Fy + 2 * np.pi * hbar * d.x * d.F) / r
    c2 = 2 * r**2 * d.Fb + 1j * r * d.Fr - 0.5j * d.F
    return _relative(c1, d.F), _relative(c2, d.F)


def structural_residuals(stack: SliceStack) -> tuple[float, float]:
    """Relative residuals of the two second-order structural operators."""
    d = _derivatives(stack)
    b, r, hbar = stack.b0, stack.r0, stack.hbar
    s1 = r**2 * (4j * np.pi * hbar * d.Fb - d.Fxx)
    s2 = (
        -4j * np.pi * hbar * r * d.Fr
        - 2 * b * d.Fxx
        + 2 * d.Fxy
        - 4j * np.pi * hbar * d.x * d.Fx
        - 2j * np.pi * hbar * d.F
    )
    return _relative(s1, d.F), _relative(s2, d.F)


def _multiplier(x: np.ndarray, w: complex, r: float, hbar: float) -> np.ndarray:
    """``exp(pi i hbar x^2 / w) / sqrt(r)``, which maps F to the holomorphic factor."""
    return np.exp(1j * np.pi * hbar * x**2 / w) / math.sqrt(r)


@dataclass(frozen=True, eq=False)
class ComplexChart:
    """Complex coordinates ``w = b + i r^2``, ``z = x + w y`` and the holomorphic factor ``f2``."""

    w: complex
    z: np.ndarray
    f2: np.ndarray
    stack: SliceStack | None = field(default=None, repr=False)
    source: ComplexField2D | None = field(default=None, repr=False)

    def field_values(self) -> np.ndarray:
        """``sqrt(r) exp(-pi i hbar x^2 / w) f2``, which should reproduce F."""
        src = self.source
        x, _ = src.mesh()
        return self.f2 / _multiplier(x, self.w, src.r, src.hbar)

    def perturbed(self, func: Callable[[np.ndarray, complex], np.ndarray]) -> "ComplexChart":
        """Chart of ``f2 + func(z, w)`` applied consistently on every slice."""
        if self.stack is None:
            raise ValueError("perturbing requires a chart built from a slice stack")

        def shift(s: ComplexField2D) -> np.ndarray:
            x, y = s.mesh()
            w = s.b + 1j * s.r**2
            return s.values + func(x + w * y, w) / _multiplier(x, w, s.r, s.hbar)

        return to_complex_chart(self.stack.map(shift))


def to_complex_chart(data) -> ComplexChart:
    stack = data if isinstance(data, SliceStack) else None
    src = stack.center if stack is not None else _as_field(data)
    x, y = src.mesh()
    w = src.b + 1j * src.r**2
    with np.errstate(over="ignore"):
        f2 = src.values * _multiplier(x, w, src.r, src.hbar)
    return ComplexChart(w, x + w * y, f2, stack, src)


def parabolic_residual(chart: ComplexChart, ctx: Context | None = None) -> float:
    """Relative residual of the parabolic equation satisfied by ``f2``.

    Derivatives of ``f2`` come from the chain rule, ``d/dz = d/dx`` and
    ``d/dw = d/db - y d/dx``, applied to ``F`` times the known multiplier.  The
    residual is measured after dividing by that multiplier, so it is relative
    to ``F`` rather than to the (rapidly growing) ``f2``.
    """
    if chart.stack is None:
        raise ValueError("the parabolic residual needs a chart built from a slice stack")
    stack = chart.stack
    hbar = stack.hbar if ctx is None else ctx.hbar
    d = _derivatives(stack)
    w, z = chart.w, chart.z
    mx = 2j * np.pi * hbar * d.x / w
    mxx = 2j * np.pi * hbar / w + mx**2
    mb = -1j * np.pi * hbar * d.x**2 / w**2
    dz = d.Fx + d.F * mx
    dzz = d.Fxx + 2 * d.Fx * mx + d.F * mxx
    dw = d.Fb + d.F * mb - d.y * dz
    q = 4j * np.pi * hbar * w * dw - w * dzz + 4j * np.pi * hbar * z * dz + 2j * np.pi * hbar * d.F
    return _relative(q, d.F)


def edge_fraction(field: ComplexField2D) -> float:
    """Largest boundary magnitude relative to the peak; small for square-integrable data."""
    mag = np.abs(field.values)
    top = mag.max()
    if top == 0:
        return 0.0
    edge = max(mag[0].max(), mag[-1].max(), mag[:, 0].max(), mag[:, -1].max())
    return float(edge / top)


def residual_report(stack: SliceStack, half_stack: SliceStack | None = None) -> dict:
    """All analyzer residuals for one stack, with step-halving ratios when a half-step stack is given."""
    c1, c2 = cauchy_riemann_residuals(stack)
    s1, s2 = structural_residuals(stack)
    report = {
        "c1": c1,
        "c2": c2,
        "s1": s1,
        "s2": s2,
        "parabolic": parabolic_residual(to_complex_chart(stack)),
        "norms": {
            "default": stack.center.norm(False),
            "paper": stack.center.norm(True),
        },
        "edge_fraction": edge_fraction(stack.center),
        "b0": stack.b0,
        "r0": stack.r0,
        "h_b": stack.h_b,
        "h_r": stack.h_r,
    }
    if half_stack is not None:
        hc1, hc2 = cauchy_riemann_residuals(half_stack)
        hs1, hs2 = structural_residuals(half_stack)
        hp = parabolic_residual(to_complex_chart(half_stack))
        half = {"c1": hc1, "c2": hc2, "s1": hs1, "s2": hs2, "parabolic": hp}
        report["half_step"] = half
        report["halving_ratio"] = {
            k: (report[k] / v if v > 0 else math.inf) for k, v in half.items() if k != "c1"
        }
    return report


@dataclass(frozen=True)
class Tolerances:
    spectral: float = 1e-6
    finite_difference: float = 1e-4
    reconstruction: float = 1e-6
    edge: float = 1e-8


@dataclass
class Characterization:
    accepted: bool
    signal: SampledSignal | None
    reason: str
    residuals: dict


def characterize(
    provider: SliceProvider,
    phi,
    tolerances: Tolerances | None = None,
    ctx: Context | None = None,
    b0: float = 0.0,
    r0: float = 1.0,
    h_b: float = 1e-3,
    h_r: float = 1e-3,
    paper_weight: bool = False,
) -> Characterization:
    """Decide whether sampled data is a metamorphism image.

    Checks the Cauchy-Riemann and first structural residuals, square
    integrability of the reference slice, then reconstructs ``f`` on the
    reference slice and compares its re-transform with the data.
    """
    tol = tolerances or Tolerances()
    ctx = ctx or Context()
    stack = SliceStack.from_provider(provider, b0, r0, h_b, h_r)
    c1, c2 = cauchy_riemann_residuals(stack)
    s1, s2 = structural_residuals(stack)
    residuals = {"c1": c1, "c2": c2, "s1": s1, "s2": s2}
    for name, value, limit in (
        ("C1", c1, tol.spectral),
        ("C2", c2, tol.finite_difference),
        ("S1", s1, tol.finite_difference),
    ):
        if not value <= limit:
            return Characterization(False, None, f"{name} residual {value:.3e} exceeds {limit:.1e}", residuals)

    ref = stack.center
    slice_norm = ref.norm(paper_weight)
    edge = edge_fraction(ref)
    residuals.update(norm=slice_norm, edge_fraction=edge)
    if not math.isfinite(slice_norm) or edge > tol.edge:
        return Characterization(
            False, None, f"reference slice is not square integrable (edge fraction {edge:.3e})", residuals
        )

    f = contravariant(ref, phi, MeasureSpec.dirac(b0, r0), ctx)
    again = covariant_fast(f, phi, b0, r0, ctx, x_count=ref.x_grid.count).field
    if not again.same_layout(ref):
        raise GridMismatchError("re-transform grid differs from the reference slice; use the default layout")
    mismatch = _relative(again.values - ref.values, ref.values)
    residuals["reconstruction"] = mismatch
    if not mismatch <= tol.reconstruction:
        return Characterization(
            False, None, f"re-transform differs from the data by {mismatch:.3e}", residuals
        )
    return Characterization(True, f, "accepted", residuals)
