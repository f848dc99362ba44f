import json
import math
import struct

import numpy as np
import pytest

from loggabor.bank import build_bank, standard_layout, BankSpec
from loggabor.grid import GridShape
from loggabor.io import (MAGIC, ConfigError, MalformedHeaderError, ShapeMismatchError,
                         TruncatedPayloadError, bank_mosaic, bank_spec_from_dict,
                         export_image, load_bank_config, load_filter, load_filter_config,
                         load_weights, parse_angle, read_pgm, read_tensor, save_filter,
                         save_weights, to_gray, write_pgm, write_tensor)
from loggabor.synth import GaussianSpec, build_weights
from loggabor.transform import idft_fast


def test_small_real_layout(tmp_path):
    p = tmp_path / "a.lgfb"
    write_tensor(p, np.array([[1.0, 2.0], [3.0, 4.0]]))
    raw = p.read_bytes()
    assert raw[:5] == b"LGFB1"
    (hlen,) = struct.unpack_from("<I", raw, 5)
    header = json.loads(raw[9:9 + hlen])
    assert header == {"dtype": "f64", "shape": [2, 2], "layout": "row-major-centered"}
    assert raw[9 + hlen:] == struct.pack("<4d", 1, 2, 3, 4)
    assert len(raw) == 5 + 4 + hlen + 32
    np.testing.assert_array_equal(read_tensor(p).data, [[1, 2], [3, 4]])


def test_complex_interleaved(tmp_path):
    p = tmp_path / "c.lgfb"
    write_tensor(p, np.array([1 + 2j, 3 - 4j]))
    raw = p.read_bytes()
    assert raw.endswith(struct.pack("<4d", 1, 2, 3, -4))


def test_filter_roundtrip(tmp_path):
    shape = GridShape(2, 21)
    f = idft_fast(build_weights(GaussianSpec((5.0, 2.0), 10.0), shape))
    save_filter(tmp_path / "f.lgfb", f, r=5.0)
    g = load_filter(tmp_path / "f.lgfb")
    assert g.re.tobytes() == f.re.tobytes() and g.im.tobytes() == f.im.tobytes()
    assert g.spec == f.spec and g.shape == shape
    assert read_tensor(tmp_path / "f.lgfb").meta["r"] == 5.0


def test_weights_roundtrip(tmp_path):
    w = build_weights(GaussianSpec((5.0, 2.0), 10.0), GridShape(2, 11))
    save_weights(tmp_path / "w.lgfb", w)
    v = load_weights(tmp_path / "w.lgfb")
    assert v.values.tobytes() == w.values.tobytes() and v.spec == w.spec


def test_header_bytes_stable(tmp_path):
    meta = {"mu": [0.1, 1 / 3], "sigma": 100.0, "N": 101, "D": 2}
    write_tensor(tmp_path / "a", np.zeros(3), "filter", meta)
    tf = read_tensor(tmp_path / "a")
    write_tensor(tmp_path / "b", tf.data, tf.semantic, tf.meta)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    assert tf.meta == meta


def test_special_values_roundtrip(tmp_path):
    data = np.array([np.nan, np.inf, -np.inf, -0.0, 5e-324])
    write_tensor(tmp_path / "s", data)
    assert read_tensor(tmp_path / "s").data.tobytes() == data.tobytes()


def test_errors_are_distinct(tmp_path):
    p = tmp_path / "t.lgfb"
    write_tensor(p, np.arange(6.0).reshape(2, 3))
    raw = p.read_bytes()
    (tmp_path / "trunc").write_bytes(raw[:-3])
    with pytest.raises(TruncatedPayloadError):
        read_tensor(tmp_path / "trunc")
    (tmp_path / "long").write_bytes(raw + b"\0" * 8)
    with pytest.raises(ShapeMismatchError):
        read_tensor(tmp_path / "long")
    (tmp_path / "magic").write_bytes(b"XXXXX" + raw[5:])
    with pytest.raises(MalformedHeaderError):
        read_tensor(tmp_path / "magic")
    (tmp_path / "json").write_bytes(MAGIC + struct.pack("<I", 3) + b"{x}")
    with pytest.raises(MalformedHeaderError):
        read_tensor(tmp_path / "json")
    (tmp_path / "dtype").write_bytes(MAGIC + struct.pack("<I", 30) + b'{"dtype":"i32","shape":[1]}   ')
    with pytest.raises(MalformedHeaderError):
        read_tensor(tmp_path / "dtype")
    (tmp_path / "short").write_bytes(MAGIC + b"\1")
    with pytest.raises(MalformedHeaderError):
        read_tensor(tmp_path / "short")
    with pytest.raises(ShapeMismatchError):
        read_tensor(p, expect_dtype="c128")
    with pytest.raises(ShapeMismatchError):
        read_tensor(p, expect_shape=(3, 2))
    assert not issubclass(TruncatedPayloadError, MalformedHeaderError)


def test_gray_symmetric():
    assert np.all(to_gray(np.zeros((3, 4))) == 128)
    g = to_gray(np.array([[-2.0, 0.0, 2.0, 1.0]]))
    assert list(g[0]) == [0, 128, 255, 192]


def test_gray_minmax():
    assert np.all(to_gray(np.full((2, 2), 7.0), "minmax") == 0)
    assert list(to_gray(np.array([[1.0, 2.0, 3.0]]), "minmax")[0]) == [0, 128, 255]
    with pytest.raises(ValueError):
        to_gray(np.zeros(3))
    with pytest.raises(ValueError):
        to_gray(np.zeros((2, 2)), "log")


def test_pgm_roundtrip(tmp_path):
    t = np.linspace(-1, 1, 35).reshape(5, 7)
    export_image(t, tmp_path / "x.pgm")
    raw = (tmp_path / "x.pgm").read_bytes()
    assert raw.startswith(b"P5\n7 5\n255\n") and len(raw) == len(b"P5\n7 5\n255\n") + 35
    np.testing.assert_array_equal(read_pgm(tmp_path / "x.pgm"), to_gray(t))


def test_read_pgm_comments(tmp_path):
    (tmp_path / "c.pgm").write_bytes(b"P5\n# made by hand\n2 1\n255\n\x05\x06")
    np.testing.assert_array_equal(read_pgm(tmp_path / "c.pgm"), [[5, 6]])


def test_bank_mosaic_layout():
    spec = BankSpec(GridShape(2, 11), 5.0, radii=(2, 4), theta_step=math.pi / 4)
    bank = build_bank(spec)
    img = bank_mosaic(bank)
    # 3 angles x (1 + 2 radii) tiles of 11 px with 1 px gaps
    assert img.shape == (3 * 12 - 1, 3 * 12 - 1)
    np.testing.assert_array_equal(img[:11, :11], to_gray(bank.filters[0].re))
    assert np.all(img[12:, :11] == 255)


def test_parse_angle():
    assert parse_angle("pi/22") == math.pi / 22
    assert parse_angle("2*pi") == 2 * math.pi
    assert parse_angle("-pi/2") == -math.pi / 2
    assert parse_angle(0.5) == 0.5
    with pytest.raises(ConfigError):
        parse_angle("tau")


def test_shipped_config_encodes_standard_layout():
    from importlib.resources import files

    spec, full = load_bank_config(files("loggabor") / "configs" / "paper-fig2.json")
    ref = standard_layout()
    assert not full
    assert spec.shape == ref.shape and spec.sigma == ref.sigma and spec.radii == ref.radii
    assert spec.theta_step == ref.theta_step and spec.theta_range == ref.theta_range
    assert spec.prune_limit is None
    g, shape = load_filter_config(files("loggabor") / "configs" / "paper-fig1.json")
    assert g == GaussianSpec((20, 20), 100) and shape == GridShape(2, 101)


@pytest.mark.parametrize("doc", [
    {"N": 101, "D": 2, "sigma": 100, "colour": "red"},
    {"N": 101, "D": 2},
    {"N": 100, "D": 2, "sigma": 1},
    {"N": 101, "D": 3, "sigma": 1},
    {"N": 101, "D": 2, "sigma": -1},
    {"N": 101, "D": 2, "sigma": 1, "theta_step": "fast"},
    {"N": 101, "D": 2, "sigma": 1, "radii": [12, 6]},
])
def test_strict_config(doc):
    with pytest.raises(ConfigError):
        bank_spec_from_dict(doc)


def test_config_auto_fields():
    spec, full = bank_spec_from_dict({"N": 101, "D": 2, "sigma": 100, "radii": [6, 12],
                                      "theta_step": "auto", "prune_limit": "auto",
                                      "full_circle": True})
    assert full and spec.theta_step == "auto" and spec.prune_limit == "auto"
