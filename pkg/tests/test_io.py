import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metamorphism import io
from metamorphism.fiducial import FiducialSpec, gaussian
from metamorphism.image_space import transform_stack
from metamorphism.signals import ComplexField2D, Context, PolyGaussChirp, SampledSignal, UniformGrid1D, hermite, sample
from metamorphism.transform import metamorphism

finite = st.floats(allow_nan=False, allow_infinity=False)
SMALL = Context(n=128)


@settings(max_examples=300)
@given(finite)
def test_float_text_is_lossless(x):
    assert float(io.fmt(x)) == x


@settings(max_examples=100)
@given(st.recursive(finite | st.integers(-10**6, 10**6) | st.booleans() | st.text(max_size=5),
                    lambda kids: st.lists(kids, max_size=4) | st.dictionaries(st.text(max_size=4), kids, max_size=4),
                    max_leaves=20))
def test_json_rewrite_is_byte_identical(obj):
    text = io.dumps(obj)
    assert io.dumps(json.loads(text)) == text


def test_negative_zero_survives_rewrite():
    text = io.dumps({"v": [-0.0, 1.0]})
    assert io.dumps(json.loads(text)) == text


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        io.dumps([float("nan")])


@pytest.mark.parametrize("doc", [
    {"family": "gaussian", "hbar": 1},
    {"family": "hermite", "hbar": 0.5, "n": 3},
    {"family": "poly_gauss_chirp", "hbar": 1, "poly": [[1, 0], [0, 2]], "alpha": [1, 0.5], "beta": [0, 0], "gamma": 0},
])
def test_signal_documents_build(tmp_path, doc):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(doc))
    d = io.read_signal(p)
    f = d.build()
    assert isinstance(f, PolyGaussChirp)
    io.write_signal(tmp_path / "a.json", d)
    io.write_signal(tmp_path / "b.json", io.read_signal(tmp_path / "a.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_hermite_document_matches_library():
    f = io.SignalDocument("hermite", 1.0, {"n": 2}).build()
    u = np.linspace(-2, 2, 9)
    assert np.allclose(f(u), hermite(2)(u))


def test_samples_round_trip(tmp_path):
    grid = UniformGrid1D.centered(64, 4.0)
    s = SampledSignal(grid, hermite(1)(grid.points) * (1 + 0.3j))
    io.write_signal(tmp_path / "s.json", io.SignalDocument.of(s))
    back = io.read_signal(tmp_path / "s.json").build()
    assert np.array_equal(back.values, s.values)
    assert back.grid.start == grid.start and back.grid.step == grid.step


def test_chirp_round_trip(tmp_path):
    f = PolyGaussChirp([0.1 + 0.2j, -1.5], 1.3 - 0.4j, 0.2j, -0.1)
    io.write_signal(tmp_path / "c.json", io.SignalDocument.of(f))
    g = io.read_signal(tmp_path / "c.json").build()
    assert np.array_equal(g.poly, f.poly) and g.alpha == f.alpha and g.beta == f.beta and g.gamma == f.gamma


@pytest.mark.parametrize("doc", [
    {"hbar": 1},
    {"family": "wavelet", "hbar": 1},
    {"family": "gaussian", "hbar": -1},
    {"family": "hermite", "hbar": 1, "n": -2},
    {"family": "hermite", "hbar": 1},
    {"family": "poly_gauss_chirp", "hbar": 1, "poly": [1], "alpha": [-1, 0]},
])
def test_bad_signal_documents(doc):
    with pytest.raises(io.InvalidInputError):
        io.SignalDocument.from_dict(doc).build()


def test_fiducial_spec_file(tmp_path):
    spec = FiducialSpec(0.25, -1, 1, 0.5, 0)
    io.write_fiducial_spec(tmp_path / "f.json", spec)
    assert io.read_fiducial_spec(tmp_path / "f.json") == spec
    assert json.loads((tmp_path / "f.json").read_text()) == {"E_s": 0.25, "E_x": -1, "E_y": 1, "E_b": 0.5, "E_r": 0}


def test_field_csv_layout(tmp_path):
    xg = UniformGrid1D(-1.0, 0.5, 3)
    yg = UniformGrid1D(2.0, 1.0, 2)
    vals = np.arange(6).reshape(2, 3) + 1j * np.arange(6).reshape(2, 3) / 3
    io.write_field_csv(tmp_path / "f.csv", ComplexField2D(xg, yg, vals))
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "x,y,re,im"
    assert lines[1] == "-1,2,0,0"
    assert lines[2] == "-0.5,2,1,0.33333333333333331"
    assert lines[4].startswith("-1,3,3,")
    back = io.read_field_csv(tmp_path / "f.csv")
    assert np.array_equal(back.values, vals)


def test_field_csv_byte_round_trip(tmp_path):
    fld = metamorphism(hermite(2), 0.3, 1.2, SMALL).field
    io.write_field_csv(tmp_path / "a.csv", fld)
    back = io.read_field_csv(tmp_path / "a.csv", 0.3, 1.2)
    assert np.array_equal(back.values, fld.values)
    io.write_field_csv(tmp_path / "b.csv", back)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize("body", ["a,b,c,d\n1,2,3,4\n", "x,y,re,im\n0,0,1,0\n1,0,1,0\n0,1,1,0\n1,2,1,0\n",
                                  "x,y,re,im\n0,0,1,0\n"])
def test_bad_field_csv(tmp_path, body):
    (tmp_path / "f.csv").write_text(body)
    with pytest.raises(io.InvalidInputError):
        io.read_field_csv(tmp_path / "f.csv")


def test_stack_directory(tmp_path):
    st = transform_stack(gaussian(), gaussian(), 0.2, 1.1, 1e-3, 2e-3, SMALL)
    io.write_stack(tmp_path / "st", st)
    names = sorted(p.name for p in (tmp_path / "st").iterdir())
    assert names == sorted(list(io.STACK_FILES.values()) + ["meta.json"])
    back = io.read_stack(tmp_path / "st")
    assert (back.b0, back.r0, back.h_b, back.h_r) == (0.2, 1.1, 1e-3, 2e-3)
    assert back.b_minus.b == pytest.approx(0.2 - 1e-3)
    assert np.array_equal(back.r_plus.values, st.r_plus.values)


def test_stack_missing_file(tmp_path):
    io.write_stack(tmp_path / "st", transform_stack(gaussian(), gaussian(), ctx=SMALL))
    (tmp_path / "st" / "slice_b0_r-h.csv").unlink()
    with pytest.raises(io.InvalidInputError):
        io.read_stack(tmp_path / "st")


def test_atomic_write_leaves_no_temp(tmp_path):
    io.write_json(tmp_path / "x.json", {"a": 1.5})
    assert [p.name for p in tmp_path.iterdir()] == ["x.json"]
