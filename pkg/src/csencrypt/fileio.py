"""On-disk formats: key files, cipher files and grayscale images.

Key file (UTF-8, LF)::

    cskeys-v1
    prng_id = numpy-pcg64-seedseq-crc32
    srm_seed = 123
    rate = 1/4
    ...

Cipher file (little-endian)::

    b"CSENC1\\n"
    u32 flags, side, meas_side, host_rows, host_cols
    f64 gamma, re_offset, re_scale, im_offset, im_scale
    payload: (re, im) f64 pairs, row-major, for a raw field (flags bit 0 clear)
             uint8 raster, row-major, when host-embedded (flags bit 0 set)

All writers go through a temporary file and an atomic rename.
"""

from __future__ import annotations

import os
import struct
import tempfile
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np

from .drpe import HostEmbedding
from .errors import FormatError, InvalidArgumentError
from .pipeline import KEY_VERSION, CipherBundle, KeyBundle

__all__ = [
    "atomic_write",
    "format_keys",
    "parse_keys",
    "read_keys",
    "write_keys",
    "cipher_to_bytes",
    "cipher_from_bytes",
    "read_cipher",
    "write_cipher",
    "read_pgm",
    "write_pgm",
    "read_image",
    "write_image",
    "load_test_image",
]

CIPHER_MAGIC = b"CSENC1\n"
FLAG_HOST = 1
_HEADER = struct.Struct("<5I5d")

_KEY_FIELDS = (
    "prng_id",
    "srm_seed",
    "rate",
    "arnold_iterations",
    "theta_seed",
    "omega_seed",
    "alpha",
    "beta",
    "gamma",
    "wavelet_levels",
)
_INT_FIELDS = {"srm_seed", "arnold_iterations", "theta_seed", "omega_seed", "wavelet_levels"}
_FLOAT_FIELDS = {"alpha", "beta", "gamma"}

_DATA_DIR = Path(__file__).parent / "data"


@contextmanager
def atomic_write(path):
    """Yield a binary file handle; the target appears only if the block succeeds."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


# -- keys -------------------------------------------------------------------

def format_keys(keys: KeyBundle) -> str:
    lines = [keys.version]
    for name in _KEY_FIELDS:
        value = getattr(keys, name)
        if name == "rate":
            text = f"{value.numerator}/{value.denominator}"
        elif name in _FLOAT_FIELDS:
            text = repr(float(value))
        else:
            text = str(value)
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"


def parse_keys(text: str) -> KeyBundle:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != KEY_VERSION:
        raise FormatError(f"key file must start with {KEY_VERSION!r}")
    values = {}
    for ln in lines[1:]:
        name, sep, raw = ln.partition("=")
        name, raw = name.strip(), raw.strip()
        if not sep:
            raise FormatError(f"malformed key line {ln!r}")
        if name not in _KEY_FIELDS:
            raise FormatError(f"unknown key field {name!r}")
        if name in values:
            raise FormatError(f"duplicate key field {name!r}")
        try:
            if name in _INT_FIELDS:
                values[name] = int(raw)
            elif name in _FLOAT_FIELDS:
                values[name] = float(raw)
            elif name == "rate":
                num, slash, den = raw.partition("/")
                if not slash:
                    raise ValueError("rate must be written as M/N")
                values[name] = Fraction(int(num), int(den))
            else:
                values[name] = raw
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad value for {name}: {raw!r} ({exc})") from exc
    missing = set(_KEY_FIELDS) - set(values)
    if missing:
        raise FormatError(f"missing key fields: {', '.join(sorted(missing))}")
    return KeyBundle(version=lines[0], **values)


def write_keys(path, keys: KeyBundle) -> None:
    with atomic_write(path) as fh:
        fh.write(format_keys(keys).encode("utf-8"))


def read_keys(path) -> KeyBundle:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: key file is not UTF-8") from exc
    return parse_keys(text)


# -- cipher -----------------------------------------------------------------

def cipher_to_bytes(cipher: CipherBundle) -> bytes:
    """Serialize; host-embedded rasters are rounded to 8 bits here."""
    if cipher.embedding is not None:
        e = cipher.embedding
        rows, cols = cipher.hidden.shape
        head = _HEADER.pack(FLAG_HOST, cipher.side, cipher.meas_side, rows, cols,
                            e.gamma, e.re_offset, e.re_scale, e.im_offset, e.im_scale)
        payload = np.clip(np.rint(cipher.hidden), 0, 255).astype(np.uint8).tobytes()
    else:
        head = _HEADER.pack(0, cipher.side, cipher.meas_side, 0, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
        field = np.ascontiguousarray(cipher.hidden, dtype=np.complex128)
        payload = field.view(np.float64).astype("<f8").tobytes()
    return CIPHER_MAGIC + head + payload


def cipher_from_bytes(data: bytes) -> CipherBundle:
    if not data.startswith(CIPHER_MAGIC):
        raise FormatError("not a cipher file (bad magic)")
    off = len(CIPHER_MAGIC)
    if len(data) < off + _HEADER.size:
        raise FormatError("truncated cipher header")
    flags, side, s, rows, cols, gamma, re_o, re_s, im_o, im_s = _HEADER.unpack_from(data, off)
    body = data[off + _HEADER.size:]
    if flags & ~FLAG_HOST:
        raise FormatError(f"unknown cipher flags {flags:#x}")
    if flags & FLAG_HOST:
        if len(body) != rows * cols:
            raise FormatError(f"payload has {len(body)} bytes, expected {rows * cols}")
        hidden = np.frombuffer(body, dtype=np.uint8).reshape(rows, cols).astype(float)
        try:
            meta = HostEmbedding(gamma, re_o, re_s, im_o, im_s)
        except InvalidArgumentError as exc:
            raise FormatError(f"bad embedding metadata: {exc}") from exc
    else:
        if len(body) != 16 * s * s:
            raise FormatError(f"payload has {len(body)} bytes, expected {16 * s * s}")
        hidden = np.frombuffer(body, dtype="<f8").astype(np.float64).view(np.complex128).reshape(s, s).copy()
        meta = None
    try:
        return CipherBundle(hidden=hidden, side=side, meas_side=s, embedding=meta)
    except InvalidArgumentError as exc:
        raise FormatError(str(exc)) from exc


def write_cipher(path, cipher: CipherBundle) -> None:
    with atomic_write(path) as fh:
        fh.write(cipher_to_bytes(cipher))


def read_cipher(path) -> CipherBundle:
    return cipher_from_bytes(Path(path).read_bytes())


# -- images -----------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset of the raster."""
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace() and data[i:i + 1] != b"#":
            i += 1
        if start == i:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates the header from the raster
    return tokens, i + 1


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) PGM; returns a float array scaled to ``[0, 255]``."""
    data = Path(path).read_bytes()
    tokens, off = _pgm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: only binary PGM (P5) is supported")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"{path}: bad PGM header") from exc
    if not 0 < maxval < 65536 or width < 1 or height < 1:
        raise FormatError(f"{path}: bad PGM dimensions or maxval")
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    size = width * height * np.dtype(dtype).itemsize
    raster = data[off:off + size]
    if len(raster) != size:
        raise FormatError(f"{path}: truncated PGM raster")
    img = np.frombuffer(raster, dtype=dtype).reshape(height, width).astype(float)
    if maxval != 255:
        img *= 255.0 / maxval
    return img


def _to_u8(image) -> np.ndarray:
    return np.clip(np.rint(np.asarray(image, dtype=float)), 0, 255).astype(np.uint8)


def write_pgm(path, image) -> None:
    """Write an 8-bit binary PGM, rounding and clipping to ``[0, 255]``."""
    raster = _to_u8(image)
    if raster.ndim != 2:
        raise InvalidArgumentError("PGM output must be a 2-D raster")
    h, w = raster.shape
    with atomic_write(path) as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(raster.tobytes())


def read_image(path) -> np.ndarray:
    """Read PGM, or grayscale PNG when Pillow is installed."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError as exc:  # pragma: no cover
            raise FormatError("PNG support needs Pillow") from exc
        with Image.open(path) as im:
            return np.asarray(im.convert("L"), dtype=float)
    return read_pgm(path)


def write_image(path, image) -> None:
    path = Path(path)
    if path.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError as exc:  # pragma: no cover
            raise FormatError("PNG support needs Pillow") from exc
        with atomic_write(path) as fh:
            Image.fromarray(_to_u8(image), mode="L").save(fh, format="PNG")
        return
    write_pgm(path, image)


def load_test_image(name: str = "cameraman") -> np.ndarray:
    """Bundled 512 x 512 8-bit test images: ``"cameraman"`` or ``"moon"``."""
    path = _DATA_DIR / f"{name}.pgm"
    if not path.exists():
        raise InvalidArgumentError(f"no bundled test image named {name!r}")
    return read_pgm(path)
