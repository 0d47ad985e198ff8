"""Reads and writes portable pixmaps, cipher envelopes and key files."""

import logging
import math
import pathlib
import struct

import numpy as np

from .cipher_engine import CipherEnvelope, ImageBuffer, MasterKey
from .exceptions import (
    DomainError,
    EnvelopeMagicError,
    EnvelopeVersionError,
    FormatError,
    KeyFieldMissingError,
    KeyParseError,
    MaxvalError,
    PPMHeaderError,
    TruncatedDataError,
)


__all__ = [
    "ENVELOPE_MAGIC",
    "ENVELOPE_VERSION",
    "decode_envelope",
    "decode_key",
    "decode_ppm",
    "encode_envelope",
    "encode_key",
    "encode_ppm",
    "is_envelope",
    "read_envelope",
    "read_key",
    "read_ppm",
    "write_envelope",
    "write_key",
    "write_ppm",
]

logger = logging.getLogger(__name__)

#: Leading bytes of every cipher envelope.
ENVELOPE_MAGIC = b"CBPX"

#: Envelope layout version written and accepted.
ENVELOPE_VERSION = 1

# magic | version u8 | width u32 | height u32 | channels u8 | block u16 | digest u32
_HEADER = struct.Struct("<4sBIIBHI")

_PPM_MAGIC = b"P6"
_PPM_MAXVAL = 255
_WHITESPACE = b" \t\n\r\v\f"


def _ppm_fields(data):
    """
    Split the header of a binary pixmap into its four fields.

    Returns the fields and the offset of the first raster byte. Comments run
    from ``#`` to the end of their line.

    """
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos] in _WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            if end < 0:
                raise PPMHeaderError("Pixmap header ends inside a comment.")
            pos = end + 1
            continue
        start = pos
        while pos < len(data) and data[pos] not in _WHITESPACE and data[pos] != 35:
            pos += 1
        if start == pos:
            raise PPMHeaderError("Pixmap header is incomplete.")
        fields.append(data[start:pos])
    # Exactly one whitespace byte separates the header from the raster.
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PPMHeaderError("Pixmap header is not terminated by whitespace.")
    return fields, pos + 1


def decode_ppm(data):
    """Parse the bytes of a binary (P6) pixmap into an :class:`ImageBuffer`."""
    if data[:2] != _PPM_MAGIC:
        raise PPMHeaderError(f"Expected a binary pixmap (P6), got {data[:2]!r}.")
    fields, offset = _ppm_fields(data)
    if fields[0] != _PPM_MAGIC:
        raise PPMHeaderError(f"Expected a binary pixmap (P6), got {fields[0]!r}.")
    try:
        width, height, maxval = (int(value) for value in fields[1:])
    except ValueError:
        raise PPMHeaderError(f"Pixmap header fields {fields[1:]} are not integers.")
    if width < 1 or height < 1:
        raise PPMHeaderError(
            f"Pixmap dimensions must be positive, got {width}x{height}."
        )
    if maxval != _PPM_MAXVAL:
        raise MaxvalError(f"Pixmap maxval must be {_PPM_MAXVAL}, got {maxval}.")
    raster = data[offset:]
    expected = width * height * 3
    if len(raster) != expected:
        raise TruncatedDataError(
            f"Pixmap raster holds {len(raster)} bytes, expected {expected}."
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return ImageBuffer(pixels.copy())


def encode_ppm(image):
    """Return the canonical binary pixmap bytes of a 3-channel image."""
    if image.channels != 3:
        raise DomainError(
            f"Binary pixmaps hold 3 channels, the image has {image.channels}."
        )
    if image.width < 1 or image.height < 1:
        raise DomainError(
            f"Pixmap dimensions must be positive, got {image.width}x{image.height}."
        )
    header = f"P6\n{image.width} {image.height}\n{_PPM_MAXVAL}\n".encode("ascii")
    return header + image.tobytes()


def read_ppm(path):
    """
    Read a binary (P6) portable pixmap with maxval 255.

    Parameters
    ----------
    path : str or path
        The file to read.

    Returns
    -------
    ImageBuffer
        A 3-channel image in file raster order.

    """
    return decode_ppm(pathlib.Path(path).read_bytes())


def write_ppm(image, path):
    """Write a 3-channel image as a canonical binary pixmap."""
    pathlib.Path(path).write_bytes(encode_ppm(image))


def encode_envelope(envelope):
    """Return the binary layout of a :class:`CipherEnvelope`."""
    header = _HEADER.pack(
        ENVELOPE_MAGIC,
        ENVELOPE_VERSION,
        envelope.width,
        envelope.height,
        envelope.channels,
        envelope.block_size,
        envelope.digest,
    )
    return header + envelope.ciphertext


def decode_envelope(data):
    """Parse the binary layout of a cipher envelope."""
    if not data.startswith(ENVELOPE_MAGIC):
        if ENVELOPE_MAGIC.startswith(data):
            raise TruncatedDataError("Envelope ends inside its magic bytes.")
        raise EnvelopeMagicError(
            f"Expected envelope magic {ENVELOPE_MAGIC!r}, got {data[:4]!r}."
        )
    if len(data) < _HEADER.size:
        raise TruncatedDataError(
            f"Envelope header needs {_HEADER.size} bytes, got {len(data)}."
        )
    _, version, width, height, channels, block_size, digest = _HEADER.unpack_from(
        data
    )
    if version != ENVELOPE_VERSION:
        raise EnvelopeVersionError(f"Unsupported envelope version {version}.")
    payload = data[_HEADER.size :]
    expected = width * height * channels
    if len(payload) != expected:
        raise TruncatedDataError(
            f"Envelope payload holds {len(payload)} bytes, expected {expected}."
        )
    try:
        return CipherEnvelope(width, height, channels, block_size, digest, payload)
    except DomainError as error:
        raise FormatError(f"Inconsistent envelope header: {error}") from error


def is_envelope(path):
    """Return True if a file starts with the envelope magic."""
    with open(path, "rb") as file:
        return file.read(len(ENVELOPE_MAGIC)) == ENVELOPE_MAGIC


def read_envelope(path):
    """Read a cipher envelope file."""
    return decode_envelope(pathlib.Path(path).read_bytes())


def write_envelope(envelope, path):
    """Write a cipher envelope file."""
    pathlib.Path(path).write_bytes(encode_envelope(envelope))


def _format_key_value(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    # 17 significant digits round-trip every double exactly.
    return format(value, ".17g")


def encode_key(key):
    """Return the ``name=value`` text of a :class:`MasterKey`."""
    return "".join(
        f"{name}={_format_key_value(getattr(key, name))}\n" for name in MasterKey.FIELDS
    )


def _parse_key_value(name, text):
    try:
        if name == "n_iter":
            return int(text)
        value = float(text)
    except ValueError:
        raise KeyParseError(f"Key field {name} has unparsable value {text!r}.")
    if not math.isfinite(value):
        raise KeyParseError(f"Key field {name} must be finite, got {text!r}.")
    return value


def decode_key(text):
    """
    Parse the ``name=value`` text of a key.

    Blank lines are ignored. Every parameter must appear exactly once.

    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name = name.strip()
        if not sep:
            raise KeyParseError(f"Key line {number} is not of the form name=value.")
        if name not in MasterKey.FIELDS:
            raise KeyParseError(f"Key line {number} names unknown field {name!r}.")
        if name in values:
            raise KeyParseError(f"Key field {name} appears more than once.")
        values[name] = _parse_key_value(name, value.strip())
    missing = [name for name in MasterKey.FIELDS if name not in values]
    if missing:
        raise KeyFieldMissingError(f"Key lacks field(s): {', '.join(missing)}.")
    return MasterKey(**values)


def read_key(path):
    """Read a key file."""
    data = pathlib.Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise KeyParseError(f"Key file {path} is not ASCII text.")
    return decode_key(text)


def write_key(key, path):
    """Write a key file."""
    pathlib.Path(path).write_text(encode_key(key), encoding="ascii")
    logger.debug("Wrote key to %s.", path)
