"""Tensor files, bank configs and 8-bit grayscale images.

Tensor file layout (all integers little-endian)::

    b"LGFB1" | uint32 header length | UTF-8 JSON header | payload

The payload holds float64 values in row-major order over the stored axes;
complex tensors interleave real and imaginary parts per element.
"""

from dataclasses import dataclass, field
import json
import math
from pathlib import Path
import re
import struct

import jsonschema
import numpy as np

from .bank import BankSpec
from .grid import GridShape
from .synth import FreqWeights, GaussianSpec
from .transform import ComplexFilter

MAGIC = b"LGFB1"
LAYOUT = "row-major-centered"
SEMANTICS = ("freq-weights", "filter", "response", "signal", "coverage")
_DTYPES = {"f64": (np.dtype("<f8"), 1), "c128": (np.dtype("<c16"), 2)}


class TensorFileError(ValueError):
    pass


class MalformedHeaderError(TensorFileError):
    pass


class TruncatedPayloadError(TensorFileError):
    pass


class ShapeMismatchError(TensorFileError):
    pass


@dataclass
class TensorFile:
    data: np.ndarray = field(repr=False)
    semantic: str = None
    meta: dict = None
    header: bytes = field(default=b"", repr=False)


def _encode_header(dtype, shape, semantic, meta):
    header = {"dtype": dtype, "shape": [int(n) for n in shape], "layout": LAYOUT}
    if semantic is not None:
        header["semantic"] = semantic
    if meta is not None:
        header["meta"] = meta
    return json.dumps(header, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


def write_tensor(path, data, semantic=None, meta=None):
    """Write a real (``f64``) or complex (``c128``) array to ``path``."""
    data = np.asarray(data)
    if semantic is not None and semantic not in SEMANTICS:
        raise ValueError(f"unknown semantic {semantic!r}")
    if np.iscomplexobj(data):
        dtype = "c128"
    else:
        dtype = "f64"
    # asarray, not ascontiguousarray: the latter promotes 0-d arrays to 1-d
    arr = np.asarray(data, dtype=_DTYPES[dtype][0])
    header = _encode_header(dtype, arr.shape, semantic, meta)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(arr.tobytes(order="C"))


def read_tensor(path, expect_dtype=None, expect_shape=None) -> TensorFile:
    raw = Path(path).read_bytes()
    if raw[:len(MAGIC)] != MAGIC:
        raise MalformedHeaderError(f"{path}: missing {MAGIC.decode()} magic")
    pos = len(MAGIC)
    if len(raw) < pos + 4:
        raise MalformedHeaderError(f"{path}: header length missing")
    (hlen,) = struct.unpack_from("<I", raw, pos)
    pos += 4
    if len(raw) < pos + hlen:
        raise MalformedHeaderError(f"{path}: header cut short")
    header_bytes = raw[pos:pos + hlen]
    try:
        header = json.loads(header_bytes.decode("utf-8"))
        dtype = header["dtype"]
        shape = tuple(header["shape"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedHeaderError(f"{path}: unreadable header ({exc})") from None
    if dtype not in _DTYPES:
        raise MalformedHeaderError(f"{path}: unsupported dtype {dtype!r}")
    if not all(isinstance(n, int) and not isinstance(n, bool) and n >= 0 for n in shape):
        raise MalformedHeaderError(f"{path}: bad shape {shape!r}")
    np_dtype, parts = _DTYPES[dtype]
    expected = 8 * parts * math.prod(shape)
    payload = raw[pos + hlen:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: payload has {len(payload)} bytes, shape {shape} needs {expected}"
        )
    if len(payload) > expected:
        raise ShapeMismatchError(
            f"{path}: payload has {len(payload)} bytes, shape {shape} needs {expected}"
        )
    if expect_dtype is not None and dtype != expect_dtype:
        raise ShapeMismatchError(f"{path}: dtype {dtype}, expected {expect_dtype}")
    if expect_shape is not None and shape != tuple(expect_shape):
        raise ShapeMismatchError(f"{path}: shape {shape}, expected {tuple(expect_shape)}")
    data = np.frombuffer(payload, dtype=np_dtype).reshape(shape).copy()
    return TensorFile(data, header.get("semantic"), header.get("meta"), header_bytes)


def _grid_meta(shape, spec):
    meta = {"N": shape.N, "D": shape.D}
    if spec is not None:
        meta["mu"] = list(spec.mu)
        meta["sigma"] = spec.sigma
    return meta


def save_filter(path, f: ComplexFilter, **extra):
    write_tensor(path, f.values, "filter", {**_grid_meta(f.shape, f.spec), **extra})


def load_filter(path) -> ComplexFilter:
    tf = read_tensor(path, expect_dtype="c128")
    meta = tf.meta or {}
    try:
        shape = GridShape(meta["D"], meta["N"])
    except KeyError:
        raise MalformedHeaderError(f"{path}: filter header lacks N/D") from None
    if tf.data.shape != shape.dims:
        raise ShapeMismatchError(f"{path}: data shape {tf.data.shape} vs grid {shape.dims}")
    spec = GaussianSpec(meta["mu"], meta["sigma"]) if "mu" in meta else None
    return ComplexFilter.from_complex(shape, tf.data, spec)


def save_weights(path, w: FreqWeights, semantic="freq-weights"):
    write_tensor(path, w.values, semantic, _grid_meta(w.shape, w.spec))


def load_weights(path) -> FreqWeights:
    tf = read_tensor(path, expect_dtype="f64")
    meta = tf.meta or {}
    shape = GridShape(meta["D"], meta["N"])
    spec = GaussianSpec(meta["mu"], meta["sigma"]) if "mu" in meta else None
    return FreqWeights(shape, tf.data, spec)


# --- images -----------------------------------------------------------------

def to_gray(t, normalization="symmetric") -> np.ndarray:
    """Map a real 2-D tensor to uint8.

    ``symmetric`` sends 0 to 128, ``+max|t|`` to 255 and ``-max|t|`` to 0.
    ``minmax`` sends ``[min, max]`` to ``[0, 255]``; a constant tensor gives 0.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 2:
        raise ValueError(f"images need a 2-D tensor, got {t.ndim}-D")
    if normalization == "symmetric":
        m = np.max(np.abs(t)) if t.size else 0.0
        if m == 0:
            return np.full(t.shape, 128, dtype=np.uint8)
        u = t / m
        v = np.where(u >= 0, 128 + 127 * u, 128 + 128 * u)
    elif normalization == "minmax":
        lo, hi = (t.min(), t.max()) if t.size else (0.0, 0.0)
        if hi == lo:
            return np.zeros(t.shape, dtype=np.uint8)
        v = 255 * (t - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    return np.clip(np.rint(v), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(img).tobytes())


def export_image(t, path, normalization="symmetric"):
    """Write a 2-D tensor as a binary PGM (axis 0 = rows)."""
    write_pgm(path, to_gray(t, normalization))


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) PGM with 8- or 16-bit samples."""
    raw = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        m = re.compile(rb"\s*(#[^\n]*\n\s*)*(\S+)").match(raw, pos)
        if m is None:
            raise ValueError(f"{path}: not a PGM file")
        tokens.append(m.group(2))
        pos = m.end()
    if tokens[0] != b"P5":
        raise ValueError(f"{path}: only binary P5 PGM is supported")
    w, h, maxval = (int(v) for v in tokens[1:])
    pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.uint8
    count = w * h
    data = np.frombuffer(raw, dtype=dtype, count=count, offset=pos)
    return data.reshape(h, w).astype(np.float64)


def mosaic(tiles, pad=1, fill=255) -> np.ndarray:
    """Assemble a grid (list of rows) of equally sized uint8 tiles; ``None`` leaves a blank."""
    th, tw = next(t.shape for row in tiles for t in row if t is not None)
    rows, cols = len(tiles), max(len(r) for r in tiles)
    out = np.full((rows * (th + pad) - pad, cols * (tw + pad) - pad), fill, dtype=np.uint8)
    for i, row in enumerate(tiles):
        for j, t in enumerate(row):
            if t is not None:
                y, x = i * (th + pad), j * (tw + pad)
                out[y:y + th, x:x + tw] = t
    return out


def bank_grid(bank):
    """Bank laid out like the reference figure: one row per angle, one column per radius.

    The low-pass filter sits in the top-left cell; oriented filters fill
    columns 1.. by ascending radius. Pruned slots stay empty.
    """
    angles = bank.spec.angles()
    radii = bank.spec.radii
    grid = [[None] * (1 + len(radii)) for _ in range(max(1, len(angles)))]
    for c, f in zip(bank.centers, bank.filters):
        if c.r == 0:
            grid[0][0] = f
            continue
        i = min(range(len(angles)), key=lambda a: abs(angles[a] - c.theta))
        grid[i][1 + radii.index(c.r)] = f
    return grid


def bank_mosaic(bank, pad=1) -> np.ndarray:
    tiles = [[None if f is None else to_gray(f.re) for f in row] for row in bank_grid(bank)]
    return mosaic(tiles, pad)


# --- configuration files ----------------------------------------------------

_ANGLE = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*[-+]?[0-9.]*\s*\*?\s*pi(\s*/\s*[0-9.]+)?\s*$"}]}

BANK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["N", "D", "sigma"],
    "properties": {
        "N": {"type": "integer", "minimum": 3},
        "D": {"const": 2},
        "sigma": {"type": "number", "exclusiveMinimum": 0},
        "radii": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "theta_step": {"oneOf": [{"const": "auto"}, _ANGLE]},
        "theta_range": {"type": "array", "items": _ANGLE, "minItems": 2, "maxItems": 2},
        "prune_limit": {"oneOf": [{"type": "null"}, {"const": "auto"}, {"type": "number", "exclusiveMinimum": 0}]},
        "full_circle": {"type": "boolean"},
    },
}

FILTER_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["N", "D", "mu", "sigma"],
    "properties": {
        "N": {"type": "integer", "minimum": 3},
        "D": {"type": "integer", "minimum": 1},
        "mu": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "sigma": {"type": "number", "exclusiveMinimum": 0},
    },
}


class ConfigError(ValueError):
    pass


def parse_angle(v) -> float:
    """Accept a number or an expression like ``"pi/22"``, ``"2*pi"``, ``"0.5pi"``."""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    m = re.fullmatch(r"\s*([-+]?[0-9.]*)\s*\*?\s*pi(?:\s*/\s*([0-9.]+))?\s*", str(v))
    if m is None:
        raise ConfigError(f"cannot parse angle {v!r}")
    coef = m.group(1)
    coef = -1.0 if coef == "-" else 1.0 if coef in ("", "+") else float(coef)
    den = float(m.group(2)) if m.group(2) else 1.0
    return coef * math.pi / den


def _validate(doc, schema, source):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{source}: {where}: {exc.message}") from None


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def bank_spec_from_dict(doc, source="<config>"):
    """Return ``(BankSpec, full_circle)`` from a parsed config document."""
    _validate(doc, BANK_SCHEMA, source)
    kw = {}
    if "radii" in doc:
        kw["radii"] = tuple(doc["radii"])
    if "theta_step" in doc:
        ts = doc["theta_step"]
        kw["theta_step"] = "auto" if ts == "auto" else parse_angle(ts)
    if "theta_range" in doc:
        kw["theta_range"] = tuple(parse_angle(v) for v in doc["theta_range"])
    if "prune_limit" in doc:
        kw["prune_limit"] = doc["prune_limit"]
    try:
        spec = BankSpec(GridShape(doc["D"], doc["N"]), doc["sigma"], **kw)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return spec, bool(doc.get("full_circle", False))


def load_bank_config(path):
    return bank_spec_from_dict(_load_json(path), str(path))


def load_filter_config(path):
    """Return ``(GaussianSpec, GridShape)`` from a single-filter config file."""
    doc = _load_json(path)
    _validate(doc, FILTER_SCHEMA, str(path))
    try:
        shape = GridShape(doc["D"], doc["N"])
        spec = GaussianSpec(doc["mu"], doc["sigma"])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if spec.D != shape.D:
        raise ConfigError(f"{path}: mu has {spec.D} components, D={shape.D}")
    return spec, shape


def bank_spec_to_dict(spec: BankSpec, full_circle=False) -> dict:
    return {
        "N": spec.shape.N,
        "D": spec.shape.D,
        "sigma": spec.sigma,
        "radii": list(spec.radii),
        "theta_step": spec.theta_step,
        "theta_range": list(spec.theta_range),
        "prune_limit": spec.prune_limit,
        "full_circle": full_circle,
    }
