"""The SSR (shear-squeeze-rotation) group and its Lie algebra.

Elements are stored as ``(s, x, y, b, r)`` with ``r > 0``: ``s`` is the
central coordinate, ``(x, y)`` the Heisenberg coordinates, ``b`` the shear
and ``r`` the squeeze.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BASIS = ("S", "X", "Y", "B", "R")


@dataclass(frozen=True)
class GroupElement:
    s: float = 0.0
    x: float = 0.0
    y: float = 0.0
    b: float = 0.0
    r: float = 1.0

    def __post_init__(self):
        for name in ("s", "x", "y", "b", "r"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.r <= 0:
            raise ValueError(f"r must be strictly positive, got {self.r}")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls()

    @classmethod
    def from_array(cls, values) -> "GroupElement":
        values = [float(v) for v in values]
        if len(values) != 5:
            raise ValueError("a group element has exactly 5 coordinates [s, x, y, b, r]")
        return cls(*values)

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.x, self.y, self.b, self.r])

    def to_list(self) -> list[float]:
        return [self.s, self.x, self.y, self.b, self.r]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    s, x, y, b, r = g1.s, g1.x, g1.y, g1.b, g1.r
    s2, x2, y2, b2, r2 = g2.s, g2.x, g2.y, g2.b, g2.r
    yr = y2 / r
    return GroupElement(
        s + s2 + x * yr - 0.5 * b * yr**2,
        x + r * x2 - b * yr,
        y + yr,
        b + b2 * r**2,
        r * r2,
    )


def inverse(g: GroupElement) -> GroupElement:
    s, x, y, b, r = g.s, g.x, g.y, g.b, g.r
    return GroupElement(
        -s + x * y + 0.5 * b * y**2,
        -(x + b * y) / r,
        -r * y,
        -b / r**2,
        1.0 / r,
    )


def to_matrix(g: GroupElement) -> np.ndarray:
    """Upper-triangular 4x4 realisation; ``to_matrix`` is a homomorphism."""
    s, x, y, b, r = g.s, g.x, g.y, g.b, g.r
    return np.array(
        [
            [1.0, -y * r, (x + b * y) / r, 2 * s - y * x],
            [0.0, r, -b / r, x],
            [0.0, 0.0, 1.0 / r, y],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def from_matrix(m: np.ndarray) -> GroupElement:
    """Read the coordinates back from a matrix of the form produced by ``to_matrix``."""
    m = np.asarray(m, dtype=float)
    r = m[1, 1]
    x = m[1, 3]
    y = m[2, 3]
    b = -m[1, 2] * r
    s = 0.5 * (m[0, 3] + y * x)
    return GroupElement(s, x, y, b, r)


def symplectic_form(x: float, y: float, x2: float, y2: float) -> float:
    return x * y2 - x2 * y


def measures(g: GroupElement) -> tuple[float, float, float]:
    """Left Haar density, right Haar density and modular function at ``g``.

    Densities are relative to ``ds dx dy db dr``.
    """
    r = g.r
    return 1.0 / r**3, 1.0 / r, 1.0 / r**2


def modular(g: GroupElement) -> float:
    return 1.0 / g.r**2


def project(g: GroupElement) -> tuple[float, float, float, float]:
    """Projection onto the quotient by the centre, ``(x, y, b, r)``."""
    return (g.x, g.y, g.b, g.r)


def section(point) -> GroupElement:
    x, y, b, r = point
    return GroupElement(0.0, x, y, b, r)


def center_decomposition(g: GroupElement) -> tuple[tuple[float, float, float, float], float]:
    """Split ``g = section(base) * (s, 0, 0, 0, 1)``; returns ``(base, s)``."""
    return project(g), g.s


def act(g: GroupElement, point) -> tuple[float, float, float, float]:
    """Left action of ``g`` on the homogeneous space ``G/Z``."""
    return project(multiply(g, section(point)))


def exp_one_param(basis: str, t: float) -> GroupElement:
    t = float(t)
    if basis == "S":
        return GroupElement(s=t)
    if basis == "X":
        return GroupElement(x=t)
    if basis == "Y":
        return GroupElement(y=t)
    if basis == "B":
        return GroupElement(b=t)
    if basis == "R":
        return GroupElement(r=float(np.exp(t)))
    raise ValueError(f"unknown basis element {basis!r}; expected one of {BASIS}")


def _structure_constants() -> np.ndarray:
    c = np.zeros((5, 5, 5))
    idx = {name: i for i, name in enumerate(BASIS)}
    table = [
        ("X", "Y", "S", 1.0),
        ("X", "R", "X", -1.0),
        ("Y", "R", "Y", 1.0),
        ("Y", "B", "X", 1.0),
        ("R", "B", "B", 2.0),
    ]
    for a, b, out, value in table:
        c[idx[a], idx[b], idx[out]] = value
        c[idx[b], idx[a], idx[out]] = -value
    return c


STRUCTURE_CONSTANTS = _structure_constants()


class AlgebraVector:
    """Coefficients over the basis ``{S, X, Y, B, R}``.

    Coefficients may be complex, so elements of the complexified algebra
    such as ``-X + iY`` are representable.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        coefficients = np.asarray(coefficients)
        if coefficients.shape != (5,):
            raise ValueError("an algebra vector has exactly 5 coefficients [S, X, Y, B, R]")
        if np.iscomplexobj(coefficients) and np.all(coefficients.imag == 0):
            coefficients = coefficients.real
        self.coefficients = coefficients.astype(complex if np.iscomplexobj(coefficients) else float)

    @classmethod
    def basis(cls, name: str) -> "AlgebraVector":
        if name not in BASIS:
            raise ValueError(f"unknown basis element {name!r}; expected one of {BASIS}")
        c = np.zeros(5)
        c[BASIS.index(name)] = 1.0
        return cls(c)

    @classmethod
    def zero(cls) -> "AlgebraVector":
        return cls(np.zeros(5))

    def __getitem__(self, name: str):
        return self.coefficients[BASIS.index(name)]

    def __add__(self, other):
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return AlgebraVector(self.coefficients + other.coefficients)

    def __sub__(self, other):
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return AlgebraVector(self.coefficients - other.coefficients)

    def __neg__(self):
        return AlgebraVector(-self.coefficients)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraVector):
            return NotImplemented
        return AlgebraVector(scalar * self.coefficients)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return bool(np.array_equal(self.coefficients, other.coefficients))

    def __repr__(self):
        terms = [f"{c}*{n}" for c, n in zip(self.coefficients, BASIS) if c != 0]
        return "AlgebraVector(" + (" + ".join(terms) or "0") + ")"

    def to_list(self) -> list[float]:
        return [float(c) for c in np.real(self.coefficients)]


S, X, Y, B, R = (AlgebraVector.basis(n) for n in BASIS)


def bracket(a: AlgebraVector, b: AlgebraVector) -> AlgebraVector:
    return AlgebraVector(np.einsum("i,j,ijk->k", a.coefficients, b.coefficients, STRUCTURE_CONSTANTS))


def generator_matrix(name: str) -> np.ndarray:
    """Image of a basis element under the derivative of :func:`to_matrix` at the identity."""
    m = np.zeros((4, 4))
    if name == "S":
        m[0, 3] = 2.0
    elif name == "X":
        m[0, 2] = m[1, 3] = 1.0
    elif name == "Y":
        m[0, 1], m[2, 3] = -1.0, 1.0
    elif name == "B":
        m[1, 2] = -1.0
    elif name == "R":
        m[1, 1], m[2, 2] = 1.0, -1.0
    else:
        raise ValueError(f"unknown basis element {name!r}; expected one of {BASIS}")
    return m


def algebra_matrix(a: AlgebraVector) -> np.ndarray:
    return sum(c * generator_matrix(n) for n, c in zip(BASIS, a.coefficients))
