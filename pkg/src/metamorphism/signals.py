"""Signals on the line and sampled fields on (x, y) slices.

Two signal families are supported.  :class:`PolyGaussChirp` is the exact
family ``p(u) exp(-pi (alpha u^2 + 2 beta u + gamma))``, closed under the
Schrodinger-type action and integrated with Gaussian moment recurrences.
:class:`SampledSignal` holds samples on a uniform grid and is integrated with
the rectangle rule, which is spectrally accurate for Schwartz-class data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np
from numpy.polynomial import hermite as _herm
from numpy.polynomial import polynomial as P

MAX_DEGREE = 64
_INTERP_CHUNK = 2048


class GridMismatchError(ValueError):
    """Raised when two sampled objects do not live on the same grid."""


class WindowOverflowError(ValueError):
    """Raised when a signal's support leaves the sampling window."""


@dataclass(frozen=True)
class Context:
    """Planck constant together with the default discretisation."""

    hbar: float = 1.0
    n: int = 512
    half_width: float = 8.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be strictly positive, got {self.hbar}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid size must be an integer >= 2, got {self.n}")
        if not self.half_width > 0:
            raise ValueError(f"window half-width must be positive, got {self.half_width}")

    def grid(self) -> "UniformGrid1D":
        return UniformGrid1D.centered(int(self.n), self.half_width)


@dataclass(frozen=True)
class UniformGrid1D:
    start: float
    step: float
    count: int
    exact_points: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"grid count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def centered(cls, count: int, half_width: float) -> "UniformGrid1D":
        """``count`` points covering ``[-half_width, half_width)``."""
        return cls(-float(half_width), 2.0 * half_width / count, count)

    @classmethod
    def from_points(cls, points) -> "UniformGrid1D":
        points = np.asarray(points, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise ValueError("need at least two points to define a uniform grid")
        step = (points[-1] - points[0]) / (points.size - 1)
        if not np.allclose(np.diff(points), step, rtol=1e-9, atol=1e-12 * max(1.0, abs(step))):
            raise ValueError("points are not uniformly spaced")
        return cls(float(points[0]), float(step), points.size, exact_points=points.copy())

    @property
    def points(self) -> np.ndarray:
        if self.exact_points is not None:
            return self.exact_points
        return self.start + self.step * np.arange(self.count)

    @property
    def stop(self) -> float:
        return self.start + self.step * (self.count - 1)

    def matches(self, other: "UniformGrid1D", rtol: float = 1e-12) -> bool:
        scale = max(abs(self.step), abs(self.start), 1.0)
        return (
            self.count == other.count
            and abs(self.step - other.step) <= rtol * abs(self.step)
            and abs(self.start - other.start) <= rtol * scale
        )

    def dual(self, hbar: float, size: int | None = None) -> "UniformGrid1D":
        """Frequency grid ``x_k = k / (hbar * size * step)``, centred, for an FFT of length ``size``."""
        size = self.count if size is None else int(size)
        dx = 1.0 / (hbar * size * self.step)
        return UniformGrid1D(-(size // 2) * dx, dx, size)

    def to_dict(self) -> dict:
        return {"start": self.start, "step": self.step, "count": self.count}


@dataclass(frozen=True, eq=False)
class SampledSignal:
    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.count,):
            raise ValueError(f"expected {self.grid.count} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, u):
        """Band-limited interpolation on the zero-padded periodic window; zero outside the window."""
        u = np.asarray(u, dtype=float)
        flat = u.ravel()
        n = self.grid.count
        m = 2 * n
        coeffs = self._coefficients()
        k = np.fft.fftfreq(m, d=1.0 / m)
        out = np.zeros(flat.shape, dtype=complex)
        t = (flat - self.grid.start) / self.grid.step
        inside = (t >= -0.5) & (t <= n - 0.5)
        idx = np.flatnonzero(inside)
        for lo in range(0, idx.size, _INTERP_CHUNK):
            sel = idx[lo : lo + _INTERP_CHUNK]
            out[sel] = np.exp(2j * np.pi * np.outer(t[sel], k) / m) @ coeffs
        return out.reshape(u.shape)

    def _coefficients(self) -> np.ndarray:
        cached = self.__dict__.get("_coeffs")
        if cached is None:
            padded = np.concatenate([self.values, np.zeros_like(self.values)])
            cached = np.fft.fft(padded) / padded.size
            cached[padded.size // 2] = 0.0
            object.__setattr__(self, "_coeffs", cached)
        return cached

    def norm(self) -> float:
        return float(np.sqrt(self.grid.step * np.sum(np.abs(self.values) ** 2)))

    def __add__(self, other):
        if not isinstance(other, SampledSignal):
            return NotImplemented
        _require_same_grid(self.grid, other.grid)
        return SampledSignal(self.grid, self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, SampledSignal):
            return NotImplemented
        _require_same_grid(self.grid, other.grid)
        return SampledSignal(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        if isinstance(scalar, (SampledSignal, PolyGaussChirp)):
            return NotImplemented
        return SampledSignal(self.grid, scalar * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PolyGaussChirp:
    """``p(u) * exp(-pi * (alpha u^2 + 2 beta u + gamma))`` with ``Re(alpha) > 0``.

    ``poly`` holds the coefficients of ``p`` in increasing degree.
    """

    poly: np.ndarray
    alpha: complex
    beta: complex = 0.0
    gamma: complex = 0.0

    def __post_init__(self):
        poly = np.atleast_1d(np.asarray(self.poly, dtype=complex))
        if poly.ndim != 1 or poly.size == 0:
            raise ValueError("poly must be a non-empty 1-d coefficient sequence")
        nz = np.flatnonzero(poly)
        poly = poly[: nz[-1] + 1] if nz.size else poly[:1] * 0
        if poly.size - 1 > MAX_DEGREE:
            raise ValueError(f"polynomial degree {poly.size - 1} exceeds the cap of {MAX_DEGREE}")
        alpha = complex(self.alpha)
        if not alpha.real > 0:
            raise ValueError(f"Re(alpha) must be positive for square integrability, got {alpha}")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "gamma", complex(self.gamma))

    @property
    def degree(self) -> int:
        return self.poly.size - 1

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return P.polyval(u, self.poly) * np.exp(
            -np.pi * (self.alpha * u**2 + 2 * self.beta * u + self.gamma)
        )

    def same_exponent(self, other: "PolyGaussChirp") -> bool:
        return all(
            np.isclose(a, b, rtol=1e-14, atol=1e-14)
            for a, b in ((self.alpha, other.alpha), (self.beta, other.beta), (self.gamma, other.gamma))
        )

    def with_poly(self, poly) -> "PolyGaussChirp":
        return PolyGaussChirp(poly, self.alpha, self.beta, self.gamma)

    def derivative(self) -> "PolyGaussChirp":
        dp = P.polyder(self.poly) if self.degree > 0 else np.zeros(1, dtype=complex)
        linear = -2 * np.pi * np.array([self.beta, self.alpha])
        return self.with_poly(P.polyadd(dp, P.polymul(linear, self.poly)))

    def times_poly(self, q) -> "PolyGaussChirp":
        return self.with_poly(P.polymul(self.poly, np.asarray(q, dtype=complex)))

    def __add__(self, other):
        if not isinstance(other, PolyGaussChirp):
            return NotImplemented
        if not self.same_exponent(other):
            raise ValueError("can only add chirps sharing the Gaussian exponent")
        return self.with_poly(P.polyadd(self.poly, other.poly))

    def __sub__(self, other):
        if not isinstance(other, PolyGaussChirp):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return self.with_poly(-self.poly)

    def __mul__(self, scalar):
        if isinstance(scalar, (PolyGaussChirp, SampledSignal)):
            return NotImplemented
        return self.with_poly(complex(scalar) * self.poly)

    __rmul__ = __mul__

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.poly) <= atol))

    def norm(self) -> float:
        return float(np.sqrt(max(inner_product(self, self).real, 0.0)))

    def envelope(self, cutoff: float = 1e-18) -> tuple[float, float]:
        """Centre and half-width outside which ``|f|`` is below ``cutoff`` times its scale."""
        a = self.alpha.real
        centre = -self.beta.real / a
        log_cut = -math.log(cutoff)
        half = math.sqrt((log_cut + 2.0 * self.degree) / (math.pi * a)) + math.sqrt(
            self.degree / (math.pi * a)
        )
        return centre, half

    def bandwidth(self, cutoff: float = 1e-18) -> float:
        """Frequency beyond which the spectrum is negligible (heuristic bound)."""
        centre, half = self.envelope(cutoff)
        reach = abs(centre) + half
        chirp = abs(self.alpha.imag) * reach + abs(self.beta.imag)
        spread = math.sqrt(-math.log(cutoff) * abs(self.alpha) ** 2 / (math.pi * self.alpha.real))
        return chirp + spread + math.sqrt(self.degree + 1.0)


Signal = Union[PolyGaussChirp, SampledSignal]


def evaluate(f: Signal, u):
    return f(u)


def sample(f: Signal, grid: UniformGrid1D) -> SampledSignal:
    if isinstance(f, SampledSignal) and f.grid.matches(grid):
        return f
    return SampledSignal(grid, f(grid.points))


def _require_same_grid(a: UniformGrid1D, b: UniformGrid1D):
    if not a.matches(b):
        raise GridMismatchError(f"grids differ: {a} vs {b}")


def _exact_inner(f: PolyGaussChirp, g: PolyGaussChirp) -> complex:
    # Complete the square, rotate the contour by sqrt(a) and apply Gauss-Hermite,
    # which is exact for the polynomial factor and avoids re-expanding it about
    # the shifted centre (that expansion cancels badly for large shifts).
    a = np.pi * (f.alpha + np.conj(g.alpha))
    bb = np.pi * (f.beta + np.conj(g.beta))
    c = np.pi * (f.gamma + np.conj(g.gamma))
    nodes, weights = _herm.hermgauss((f.poly.size + g.poly.size) // 2 + 1)
    root = np.sqrt(a)
    u = nodes / root - bb / a
    vals = P.polyval(u, f.poly) * P.polyval(u, np.conj(g.poly))
    return complex(np.exp(bb**2 / a - c) * np.dot(weights, vals) / root)


def inner_product(f: Signal, g: Signal, grid: UniformGrid1D | None = None) -> complex:
    """``<f, g> = int f(u) conj(g(u)) du``.

    Exact when both arguments are :class:`PolyGaussChirp` and no ``grid`` is
    forced; otherwise the rectangle rule on the common grid.
    """
    if grid is None:
        if isinstance(f, PolyGaussChirp) and isinstance(g, PolyGaussChirp):
            return _exact_inner(f, g)
        if isinstance(f, SampledSignal) and isinstance(g, SampledSignal):
            _require_same_grid(f.grid, g.grid)
            grid = f.grid
        else:
            grid = f.grid if isinstance(f, SampledSignal) else g.grid
    fv = sample(f, grid).values
    gv = sample(g, grid).values
    return complex(grid.step * np.sum(fv * np.conj(gv)))


def norm(f: Signal) -> float:
    return f.norm()


def hermite(n: int, hbar: float = 1.0) -> PolyGaussChirp:
    """Hermite function of order ``n``, orthonormal in ``L2(du)``, scaled to ``exp(-pi hbar u^2)``."""
    if int(n) != n or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"order {n} exceeds the supported maximum of {MAX_DEGREE}")
    if not hbar > 0:
        raise ValueError(f"hbar must be strictly positive, got {hbar}")
    n = int(n)
    unit = np.zeros(n + 1)
    unit[n] = 1.0
    coeffs = _herm.herm2poly(unit)
    scale = math.sqrt(2 * math.pi * hbar)
    log_norm = 0.25 * math.log(2 * hbar) - 0.5 * (n * math.log(2) + math.lgamma(n + 1))
    coeffs = coeffs * scale ** np.arange(n + 1) * math.exp(log_norm)
    return PolyGaussChirp(coeffs, hbar)


def spectral_derivative(values: np.ndarray, step: float, axis: int = -1, order: int = 1) -> np.ndarray:
    """Periodic Fourier derivative of samples that decay at the window edges."""
    values = np.asarray(values, dtype=complex)
    n = values.shape[axis]
    k = np.fft.fftfreq(n, d=step)
    mult = (2j * np.pi * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        mult[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)


def partial_fourier(
    values: np.ndarray,
    u_grid: UniformGrid1D,
    hbar: float,
    pad: int = 2,
    x_count: int | None = None,
) -> tuple[UniformGrid1D, np.ndarray]:
    """``[F2 F](y, x) = int F(y, u) exp(-2 pi i hbar x u) du`` along the last axis.

    The ``u`` axis is zero-padded to ``pad * N`` points; the output lives on the
    centred dual grid ``x_k = k / (hbar * pad * N * du)``, cropped to the
    central ``x_count`` points (all of them by default).
    """
    values = np.asarray(values, dtype=complex)
    if values.shape[-1] != u_grid.count:
        raise GridMismatchError(f"last axis has {values.shape[-1]} points, grid has {u_grid.count}")
    m = pad * u_grid.count
    full = u_grid.dual(hbar, m)
    spectrum = np.fft.fftshift(np.fft.fft(values, n=m, axis=-1), axes=-1)
    x = full.points
    spectrum *= u_grid.step * np.exp(-2j * np.pi * hbar * x * u_grid.start)
    if x_count is None or x_count >= m:
        return full, spectrum
    lo = (m - x_count) // 2
    grid = UniformGrid1D(full.start + lo * full.step, full.step, x_count)
    return grid, spectrum[..., lo : lo + x_count]


def inverse_partial_fourier(
    values: np.ndarray,
    x_grid: UniformGrid1D,
    u_grid: UniformGrid1D,
    hbar: float,
) -> np.ndarray:
    """Conjugate kernel: ``int G(y, x) exp(2 pi i hbar x u) hbar dx`` on ``u_grid``.

    Evaluated as a dense sum, so ``x_grid`` need not be an FFT dual grid.
    """
    values = np.asarray(values, dtype=complex)
    kernel = np.exp(2j * np.pi * hbar * np.outer(x_grid.points, u_grid.points))
    return hbar * x_grid.step * (values @ kernel)


@dataclass(frozen=True, eq=False)
class ComplexField2D:
    """Samples ``F(x, y; b, r)`` on one ``(b, r)`` slice; ``values[i_y, i_x]``."""

    x_grid: UniformGrid1D
    y_grid: UniformGrid1D
    values: np.ndarray
    b: float = 0.0
    r: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.y_grid.count, self.x_grid.count):
            raise ValueError(
                f"values shape {values.shape} does not match grids ({self.y_grid.count}, {self.x_grid.count})"
            )
        if not self.r > 0:
            raise ValueError(f"slice r must be strictly positive, got {self.r}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be strictly positive, got {self.hbar}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "hbar", float(self.hbar))

    def with_values(self, values) -> "ComplexField2D":
        return ComplexField2D(self.x_grid, self.y_grid, values, self.b, self.r, self.hbar)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(X, Y)`` arrays broadcast to ``values.shape``."""
        return np.meshgrid(self.x_grid.points, self.y_grid.points)

    def slice_weight(self, paper_weight: bool = False) -> float:
        w = self.hbar * self.x_grid.step * self.y_grid.step
        return w / math.sqrt(2 * self.r) if paper_weight else w

    def norm(self, paper_weight: bool = False) -> float:
        return float(np.sqrt(self.slice_weight(paper_weight) * np.sum(np.abs(self.values) ** 2)))

    def same_layout(self, other: "ComplexField2D") -> bool:
        return (
            self.x_grid.matches(other.x_grid)
            and self.y_grid.matches(other.y_grid)
            and math.isclose(self.hbar, other.hbar, rel_tol=1e-14)
        )


@dataclass(frozen=True)
class MeasureSpec:
    """Probability measure on ``(b, r)``: a finite list of ``(b, r, weight)`` atoms.

    With ``paper_weight`` the per-slice weight is ``hbar dx dy / sqrt(2 r)``
    instead of the default ``hbar dx dy``.
    """

    atoms: tuple[tuple[float, float, float], ...]
    paper_weight: bool = False

    def __post_init__(self):
        atoms = tuple((float(b), float(r), float(w)) for b, r, w in self.atoms)
        if not atoms:
            raise ValueError("a measure needs at least one atom")
        for b, r, w in atoms:
            if not r > 0:
                raise ValueError(f"atom r must be strictly positive, got {r}")
            if w < 0:
                raise ValueError(f"atom weights must be non-negative, got {w}")
        total = sum(w for _, _, w in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"atom weights must sum to 1, got {total}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def dirac(cls, b0: float = 0.0, r0: float = 1.0, paper_weight: bool = False) -> "MeasureSpec":
        return cls(((b0, r0, 1.0),), paper_weight)

    @classmethod
    def discrete(cls, atoms, paper_weight: bool = False) -> "MeasureSpec":
        return cls(tuple(atoms), paper_weight)

    @property
    def is_dirac(self) -> bool:
        return len(self.atoms) == 1


Slices = Union[ComplexField2D, Mapping, Sequence[ComplexField2D]]


class SliceMismatchError(ValueError):
    """Raised when a measure references a slice that is not available."""


def as_slice_list(data) -> list[ComplexField2D]:
    if isinstance(data, ComplexField2D):
        return [data]
    if hasattr(data, "field") and isinstance(data.field, ComplexField2D):
        return [data.field]
    if hasattr(data, "slices"):
        return list(data.slices())
    if isinstance(data, Mapping):
        return [as_slice_list(v)[0] for v in data.values()]
    return [as_slice_list(v)[0] for v in data]


def find_slice(slices: Sequence[ComplexField2D], b: float, r: float) -> ComplexField2D:
    for s in slices:
        if math.isclose(s.b, b, rel_tol=1e-12, abs_tol=1e-12) and math.isclose(s.r, r, rel_tol=1e-12):
            return s
    raise SliceMismatchError(f"no slice at (b, r) = ({b}, {r}); available: {[(s.b, s.r) for s in slices]}")


def slice_inner_product(F: Slices, G: Slices, measure: MeasureSpec) -> complex:
    """``<F, G>_mu``: per-slice quadrature against ``hbar dx dy`` combined with the measure weights."""
    fs, gs = as_slice_list(F), as_slice_list(G)
    total = 0j
    for b, r, w in measure.atoms:
        if w == 0:
            continue
        fa, ga = find_slice(fs, b, r), find_slice(gs, b, r)
        if not fa.same_layout(ga):
            raise GridMismatchError("fields on the same slice use different grids")
        total += w * fa.slice_weight(measure.paper_weight) * np.sum(fa.values * np.conj(ga.values))
    return complex(total)
