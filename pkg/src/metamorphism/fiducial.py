"""Fiducial vectors annihilated by a first-order combination of the derived representation.

A :class:`FiducialSpec` ``(E_s, E_x, E_y, E_b, E_r)`` selects the operator

    (E_r u - i E_y) d/du + pi hbar (E_b u^2 + 2 i E_x u - 2 E_s) + E_r / 2,

and the constructors below return its normalised null solutions.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .signals import (
    Context,
    PolyGaussChirp,
    SampledSignal,
    UniformGrid1D,
    inner_product,
    sample,
    spectral_derivative,
)


class InvalidSpecError(ValueError):
    """The coefficients do not define a square-integrable fiducial vector."""


@dataclass(frozen=True)
class FiducialSpec:
    E_s: float = 0.0
    E_x: float = 0.0
    E_y: float = 0.0
    E_b: float = 0.0
    E_r: float = 0.0

    def __post_init__(self):
        for name in ("E_s", "E_x", "E_y", "E_b", "E_r"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidSpecError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if all(v == 0 for v in self.as_tuple()):
            raise InvalidSpecError("all coefficients are zero")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.E_s, self.E_x, self.E_y, self.E_b, self.E_r)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FiducialSpec":
        unknown = set(data) - {"E_s", "E_x", "E_y", "E_b", "E_r"}
        if unknown:
            raise InvalidSpecError(f"unknown fiducial coefficients: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def exponent(self, hbar: float) -> float:
        """Power ``kappa`` of ``(E_r u - i E_y)`` in the ``E_r != 0`` family.

        It equals ``-1/2 - pi hbar P(i E_y / E_r) / E_r`` where
        ``P(u) = E_b u^2 + 2 i E_x u - 2 E_s``, the remainder left after dividing
        the operator's potential by ``E_r u - i E_y``.
        """
        E_s, E_x, E_y, E_b, E_r = self.as_tuple()
        if E_r == 0:
            raise InvalidSpecError("the exponent is only defined when E_r != 0")
        return (
            -0.5
            + 2 * math.pi * hbar * E_s / E_r
            + math.pi * hbar * E_y * (2 * E_x * E_r + E_b * E_y) / E_r**3
        )


def _ctx(ctx):
    return Context() if ctx is None else ctx


def gaussian(ctx: Context | None = None) -> PolyGaussChirp:
    """Unit-norm ``C exp(-pi hbar u^2)``; ``C`` is computed, equal to ``(2 hbar)^(1/4)``."""
    hbar = _ctx(ctx).hbar
    raw = PolyGaussChirp([1.0], hbar)
    c = 1.0 / math.sqrt(inner_product(raw, raw).real)
    return PolyGaussChirp([c], hbar)


def _normalised(grid: UniformGrid1D, values: np.ndarray) -> SampledSignal:
    raw = SampledSignal(grid, values)
    n = raw.norm()
    if not n > 0 or not math.isfinite(n):
        raise InvalidSpecError("fiducial samples have zero or non-finite norm on this grid")
    return SampledSignal(grid, values / n)


def airy_type(spec: FiducialSpec, ctx: Context | None = None, grid: UniformGrid1D | None = None) -> SampledSignal:
    """Cubic-phase family for ``E_r = 0``."""
    ctx = _ctx(ctx)
    grid = ctx.grid() if grid is None else grid
    E_s, E_x, E_y, E_b, E_r = spec.as_tuple()
    if E_r != 0:
        raise InvalidSpecError("the cubic-phase family needs E_r = 0")
    if E_y == 0:
        raise InvalidSpecError("E_y != 0 is required when E_r = 0")
    if not E_x / E_y < 0:
        raise InvalidSpecError(
            "E_x / E_y < 0 is required for square integrability (E_x < 0 when E_y > 0)"
        )
    u = grid.points
    h = ctx.hbar
    expo = np.pi * h * (2j * (E_s / E_y) * u + (E_x / E_y) * u**2 - 1j * (E_b / (3 * E_y)) * u**3)
    return _normalised(grid, np.exp(expo))


def generic_type(spec: FiducialSpec, ctx: Context | None = None, grid: UniformGrid1D | None = None) -> SampledSignal:
    """Power-Gaussian family for ``E_r != 0`` (principal branch of the complex power).

    The branch point sits at ``u = i E_y / E_r``.  When it lies within a few
    grid steps of the real axis the samples are not well resolved and the
    spectral annihilation residual degrades accordingly.
    """
    ctx = _ctx(ctx)
    grid = ctx.grid() if grid is None else grid
    E_s, E_x, E_y, E_b, E_r = spec.as_tuple()
    h = ctx.hbar
    if E_r == 0:
        raise InvalidSpecError("the power-Gaussian family needs E_r != 0")
    if not h * E_b / E_r > 0:
        raise InvalidSpecError("hbar * E_b / E_r > 0 is required for square integrability")
    kappa = spec.exponent(h)
    if E_y == 0 and kappa < 0:
        raise InvalidSpecError(
            f"with E_y = 0 the factor u^kappa is singular at u = 0 (kappa = {kappa:.6g} < 0)"
        )
    u = grid.points
    base = (E_r * u - 1j * E_y).astype(complex)
    lin = 1j * (2 * E_x * E_r + E_b * E_y) / E_r**2
    envelope = np.exp(-np.pi * h * (lin * u + E_b / (2 * E_r) * u**2))
    if kappa == 0:
        power = np.ones_like(base)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            power = np.where(base == 0, 0.0, np.power(base, kappa))
    return _normalised(grid, power * envelope)


def from_spec(spec: FiducialSpec, ctx: Context | None = None, grid: UniformGrid1D | None = None) -> SampledSignal:
    if spec.E_r == 0:
        return airy_type(spec, ctx, grid)
    return generic_type(spec, ctx, grid)


def annihilation_residual(
    spec: FiducialSpec,
    f,
    ctx: Context | None = None,
    grid: UniformGrid1D | None = None,
) -> float:
    """Relative L2 norm of the spec's operator applied to ``f`` (spectral derivative)."""
    ctx = _ctx(ctx)
    if grid is None:
        grid = f.grid if isinstance(f, SampledSignal) else ctx.grid()
    fs = sample(f, grid)
    total = fs.norm()
    if total == 0:
        raise ValueError("the residual is undefined for the zero signal")
    E_s, E_x, E_y, E_b, E_r = spec.as_tuple()
    u = grid.points
    h = ctx.hbar
    df = spectral_derivative(np.concatenate([fs.values, np.zeros_like(fs.values)]), grid.step)[: grid.count]
    out = (E_r * u - 1j * E_y) * df + (np.pi * h * (E_b * u**2 + 2j * E_x * u - 2 * E_s) + 0.5 * E_r) * fs.values
    return float(np.sqrt(grid.step * np.sum(np.abs(out) ** 2)) / total)
