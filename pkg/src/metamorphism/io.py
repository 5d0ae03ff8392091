"""Reading and writing signals, fiducial specs, fields and slice stacks.

Every float is written with 17 significant digits so that reading a file
and writing it again reproduces it byte for byte.  Files are written to a
temporary name in the target directory and renamed into place.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fiducial import FiducialSpec, gaussian
from .signals import (
    ComplexField2D,
    Context,
    PolyGaussChirp,
    SampledSignal,
    UniformGrid1D,
    hermite,
)

FAMILIES = ("gaussian", "hermite", "poly_gauss_chirp", "samples")


class InvalidInputError(ValueError):
    """A file does not follow the expected layout."""


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    # "-0" would read back from JSON as the integer 0
    return format(x + 0.0, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # short numeric rows such as [re, im] stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats."""
    return _encode(obj, indent, 0) + "\n"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, dumps(obj))


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from exc


def _pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(p, what: str) -> complex:
    if isinstance(p, (int, float)):
        return complex(p)
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise InvalidInputError(f"{what}: expected a number or a [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


@dataclass
class SignalDocument:
    """A signal together with the description it was read from or will be written as."""

    family: str
    hbar: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown signal family {self.family!r}; expected one of {FAMILIES}")
        if not (isinstance(self.hbar, (int, float)) and self.hbar > 0):
            raise InvalidInputError(f"hbar must be a positive number, got {self.hbar!r}")

    def build(self):
        ctx = Context(hbar=float(self.hbar))
        p = self.params
        try:
            if self.family == "gaussian":
                return gaussian(ctx)
            if self.family == "hermite":
                n = p["n"]
                if not isinstance(n, int) or n < 0:
                    raise InvalidInputError(f"hermite order must be a non-negative integer, got {n!r}")
                return hermite(n, ctx.hbar)
            if self.family == "poly_gauss_chirp":
                poly = [_unpair(c, "poly") for c in p["poly"]]
                return PolyGaussChirp(
                    poly,
                    _unpair(p["alpha"], "alpha"),
                    _unpair(p.get("beta", 0.0), "beta"),
                    _unpair(p.get("gamma", 0.0), "gamma"),
                )
            grid = UniformGrid1D(float(p["start"]), float(p["step"]), len(p["values"]))
            return SampledSignal(grid, np.array([_unpair(v, "values") for v in p["values"]]))
        except KeyError as exc:
            raise InvalidInputError(f"{self.family} signal is missing field {exc}") from exc
        except InvalidInputError:
            raise
        except ValueError as exc:
            raise InvalidInputError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {"family": self.family, "hbar": float(self.hbar), **self.params}

    @classmethod
    def from_dict(cls, data: dict) -> "SignalDocument":
        if not isinstance(data, dict) or "family" not in data:
            raise InvalidInputError("signal JSON needs a 'family' field")
        params = {k: v for k, v in data.items() if k not in ("family", "hbar")}
        return cls(data["family"], data.get("hbar", 1.0), params)

    @classmethod
    def of(cls, signal, hbar: float = 1.0, **extra) -> "SignalDocument":
        """Describe an in-memory signal; ``extra`` entries are stored alongside."""
        if isinstance(signal, SampledSignal):
            params = {
                "start": signal.grid.start,
                "step": signal.grid.step,
                "values": [_pair(v) for v in signal.values],
            }
        elif isinstance(signal, PolyGaussChirp):
            params = {
                "poly": [_pair(c) for c in signal.poly],
                "alpha": _pair(signal.alpha),
                "beta": _pair(signal.beta),
                "gamma": _pair(signal.gamma),
            }
        else:
            raise TypeError(f"cannot describe {type(signal).__name__}")
        params.update(extra)
        family = "samples" if isinstance(signal, SampledSignal) else "poly_gauss_chirp"
        return cls(family, float(hbar), params)


def read_signal(path) -> SignalDocument:
    return SignalDocument.from_dict(read_json(path))


def write_signal(path, doc: SignalDocument) -> None:
    write_json(path, doc.to_dict())


def read_fiducial_spec(path) -> FiducialSpec:
    data = read_json(path)
    if not isinstance(data, dict):
        raise InvalidInputError("fiducial spec must be a JSON object")
    return FiducialSpec.from_dict(data)


def write_fiducial_spec(path, spec: FiducialSpec) -> None:
    write_json(path, spec.to_dict())


CSV_HEADER = "x,y,re,im"


def field_to_csv(field: ComplexField2D) -> str:
    if not np.all(np.isfinite(field.values)):
        raise ValueError("cannot serialise a field with non-finite values")
    xs = [fmt(x) for x in field.x_grid.points.tolist()]
    lines = [CSV_HEADER]
    for y, row in zip(field.y_grid.points.tolist(), field.values):
        sy = fmt(y)
        lines.extend(
            f"{x},{sy},{re + 0.0:.17g},{im + 0.0:.17g}"
            for x, re, im in zip(xs, row.real.tolist(), row.imag.tolist())
        )
    return "\n".join(lines) + "\n"


def write_field_csv(path, field: ComplexField2D) -> None:
    atomic_write_text(path, field_to_csv(field))


def read_field_csv(path, b: float = 0.0, r: float = 1.0, hbar: float = 1.0) -> ComplexField2D:
    """Parse a field CSV; the grids keep the exact point values found in the file."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise InvalidInputError(f"{path}: expected header {CSV_HEADER!r}, got {header!r}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise InvalidInputError(f"{path}: {exc}") from exc
    if data.shape[1] != 4 or data.shape[0] < 4:
        raise InvalidInputError(f"{path}: expected at least a 2x2 field with four columns")
    y0 = data[0, 1]
    nx = int(np.argmax(data[:, 1] != y0)) if np.any(data[:, 1] != y0) else data.shape[0]
    if data.shape[0] % nx:
        raise InvalidInputError(f"{path}: row count {data.shape[0]} is not a multiple of the row length {nx}")
    ny = data.shape[0] // nx
    grid = data.reshape(ny, nx, 4)
    xs, ys = grid[0, :, 0], grid[:, 0, 1]
    if not (np.array_equal(grid[:, :, 0], np.broadcast_to(xs, (ny, nx)))
            and np.array_equal(grid[:, :, 1], np.broadcast_to(ys[:, None], (ny, nx)))):
        raise InvalidInputError(f"{path}: rows are not ordered over y then x on a tensor grid")
    try:
        xg, yg = UniformGrid1D.from_points(xs), UniformGrid1D.from_points(ys)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from exc
    return ComplexField2D(xg, yg, grid[:, :, 2] + 1j * grid[:, :, 3], b, r, hbar)


STACK_FILES = {
    "center": "slice_b0_r0.csv",
    "b_plus": "slice_b+h_r0.csv",
    "b_minus": "slice_b-h_r0.csv",
    "r_plus": "slice_b0_r+h.csv",
    "r_minus": "slice_b0_r-h.csv",
}
HALF_STEP_DIR = "half"


def write_stack(directory, stack) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    c = stack.center
    meta = {
        "b0": stack.b0,
        "r0": stack.r0,
        "h_b": stack.h_b,
        "h_r": stack.h_r,
        "hbar": stack.hbar,
        "grids": {"x": c.x_grid.to_dict(), "y": c.y_grid.to_dict()},
    }
    for name, fname in STACK_FILES.items():
        write_field_csv(directory / fname, getattr(stack, name))
    write_json(directory / "meta.json", meta)


def read_stack(directory):
    from .image_space import SliceStack

    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.is_file():
        raise InvalidInputError(f"{directory}: missing meta.json")
    meta = read_json(meta_path)
    try:
        b0, r0 = float(meta["b0"]), float(meta["r0"])
        h_b, h_r, hbar = float(meta["h_b"]), float(meta["h_r"]), float(meta["hbar"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"{meta_path}: missing or invalid field {exc}") from exc
    where = {
        "center": (b0, r0),
        "b_plus": (b0 + h_b, r0),
        "b_minus": (b0 - h_b, r0),
        "r_plus": (b0, r0 + h_r),
        "r_minus": (b0, r0 - h_r),
    }
    fields = {}
    for name, fname in STACK_FILES.items():
        path = directory / fname
        if not path.is_file():
            raise InvalidInputError(f"{directory}: missing {fname}")
        fields[name] = read_field_csv(path, *where[name], hbar=hbar)
    try:
        return SliceStack(h_b=h_b, h_r=h_r, **fields)
    except ValueError as exc:
        raise InvalidInputError(f"{directory}: {exc}") from exc
