"""Provides the block-permutation and XOR-diffusion image cipher."""

from dataclasses import dataclass, field, replace
import logging
import math
import time

import numpy as np

from .chaos_core import (
    DEFAULT_A,
    DEFAULT_B,
    DEFAULT_BURN_IN,
    DEFAULT_MU,
    DuffingParams,
    LogisticParams,
    MU_RANGE,
    Permutation,
    combine_streams,
    floats_to_bytes,
    floats_to_permutation,
    generate_sequence,
)
from .exceptions import DomainError, KeyRangeError


__all__ = [
    "DEFAULT_BLOCK_SIZE",
    "ENCRYPT_PHASES",
    "BlockGrid",
    "CipherEnvelope",
    "ImageBuffer",
    "MasterKey",
    "apply_block_permutation",
    "build_keystream",
    "decrypt",
    "derive_initial_conditions",
    "encrypt",
    "invert_permutation",
    "key_space_bits",
    "merge_blocks",
    "partition_blocks",
    "plaintext_digest",
    "xor_diffuse",
]

logger = logging.getLogger(__name__)

#: Block edge used when none is requested (256 blocks on a 512 x 512 image).
DEFAULT_BLOCK_SIZE = 32

# Fractional part of the golden ratio, spreading the digest over y, v and w.
_PHI = 0.6180339887

_DIGEST_SCALE = 2.0 ** -32
_DIGEST_MODULUS = 2 ** 32

#: Encryption phases reported through the ``timings`` argument of encrypt.
ENCRYPT_PHASES = ("digest", "keystream", "permutation", "diffusion")


def _frac(value):
    return value - math.floor(value)


def _fold(value):
    # Maps any real into [0.01, 0.99).
    return 0.01 + 0.98 * _frac(value)


@dataclass(frozen=True)
class MasterKey:
    """
    The secret shared by encryption and decryption.

    Parameters
    ----------
    x, y, v, w : float
        Initial conditions, each within (0, 1). ``x`` seeds the logistic map,
        ``(v, w)`` seed the Duffing map and ``y`` perturbs the logistic orbit
        once its burn-in ends.
    mu : float, optional
        Logistic control parameter in [3.57, 4.0]. Defaults to 3.99.
    a, b : float, optional
        Duffing constants. Default to 2.75 and 0.2.
    n_iter : int, optional
        Positive burn-in iteration count. Defaults to 1000.

    """

    x: float
    y: float
    v: float
    w: float
    mu: float = DEFAULT_MU
    a: float = DEFAULT_A
    b: float = DEFAULT_B
    n_iter: int = DEFAULT_BURN_IN

    #: Parameter names in serialization order.
    FIELDS = ("x", "y", "v", "w", "mu", "a", "b", "n_iter")

    def __post_init__(self):
        for name in ("x", "y", "v", "w"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise KeyRangeError(
                    f"Initial condition {name} must lie in (0, 1), got {value!r}."
                )
        if not MU_RANGE[0] <= self.mu <= MU_RANGE[1]:
            raise KeyRangeError(
                f"mu must lie in [{MU_RANGE[0]}, {MU_RANGE[1]}], got {self.mu!r}."
            )
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise KeyRangeError(f"Duffing constant {name} must be finite.")
        if isinstance(self.n_iter, bool) or not isinstance(
            self.n_iter, (int, np.integer)
        ):
            raise KeyRangeError(f"n_iter must be an integer, got {self.n_iter!r}.")
        if self.n_iter < 1:
            raise KeyRangeError(f"n_iter must be positive, got {self.n_iter}.")


def key_space_bits(precision=1e-10, n_params=len(MasterKey.FIELDS)):
    """
    Return the base-2 logarithm of the key space size.

    Each of ``n_params`` parameters is assumed distinguishable at
    ``precision``, giving ``(1 / precision) ** n_params`` keys.

    Examples
    --------
    >>> round(key_space_bits(), 2)
    265.75

    """
    return n_params * math.log2(1.0 / precision)


class ImageBuffer:
    """
    An 8-bit raster image.

    Pixels are held as a ``(height, width, channels)`` ``uint8`` array, so the
    flattened buffer is row-major and channel-interleaved.

    """

    def __init__(self, pixels):
        """
        Create an ImageBuffer around a pixel array.

        Parameters
        ----------
        pixels : array_like
            A ``(height, width, channels)`` or ``(height, width)`` array with
            values in [0, 255]. A 2D array is treated as a single channel.

        """
        pixels = np.asarray(pixels)
        if pixels.ndim == 2:
            pixels = pixels[..., np.newaxis]
        if pixels.ndim != 3:
            raise DomainError(
                f"Expected a (height, width, channels) array, got shape "
                f"{pixels.shape}."
            )
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise DomainError("Pixel values must lie in [0, 255].")
            pixels = pixels.astype(np.uint8)
        self.pixels = np.ascontiguousarray(pixels)

    @classmethod
    def from_bytes(cls, data, width, height, channels):
        """Build an image from a row-major, channel-interleaved byte buffer."""
        expected = width * height * channels
        buffer = np.frombuffer(bytes(data), dtype=np.uint8)
        if buffer.size != expected:
            raise DomainError(
                f"Expected {expected} pixel bytes for a {width}x{height}x"
                f"{channels} image, got {buffer.size}."
            )
        return cls(buffer.reshape(height, width, channels))

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def channels(self):
        return self.pixels.shape[2]

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def size(self):
        """Return the number of pixel values."""
        return self.pixels.size

    def tobytes(self):
        return self.pixels.tobytes()

    def copy(self):
        return ImageBuffer(self.pixels.copy())

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return (
            f"ImageBuffer(width={self.width}, height={self.height}, "
            f"channels={self.channels})"
        )


@dataclass(frozen=True)
class CipherEnvelope:
    """
    An encrypted image together with what decryption needs besides the key.

    Parameters
    ----------
    width, height, channels : int
        Geometry of the plaintext image.
    block_size : int
        Edge of the square blocks that were shuffled.
    digest : int
        32-bit plaintext digest mixed into the initial conditions.
    ciphertext : bytes
        ``width * height * channels`` encrypted bytes in raster order.

    """

    width: int
    height: int
    channels: int
    block_size: int
    digest: int
    ciphertext: bytes = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ciphertext", bytes(self.ciphertext))
        if min(self.width, self.height, self.channels, self.block_size) < 1:
            raise DomainError("Envelope dimensions and block size must be positive.")
        _check_block_size(self.width, self.height, self.block_size)
        if not 0 <= self.digest < _DIGEST_MODULUS:
            raise DomainError(f"Digest must be a 32-bit value, got {self.digest}.")
        expected = self.width * self.height * self.channels
        if len(self.ciphertext) != expected:
            raise DomainError(
                f"Ciphertext holds {len(self.ciphertext)} bytes, expected {expected}."
            )

    def as_image(self):
        """Return the ciphertext reinterpreted through the image geometry."""
        return ImageBuffer.from_bytes(
            self.ciphertext, self.width, self.height, self.channels
        )


class BlockGrid:
    """
    An image cut into square tiles.

    Tiles are held as an ``(n_blocks, m, m, channels)`` array in row-major
    block order, alongside the ``(rows, cols)`` layout of the grid.

    """

    def __init__(self, blocks, grid_dims):
        blocks = np.asarray(blocks)
        rows, cols = grid_dims
        if blocks.ndim != 4 or blocks.shape[1] != blocks.shape[2]:
            raise DomainError(
                f"Expected (n_blocks, m, m, channels) tiles, got {blocks.shape}."
            )
        if blocks.shape[0] != rows * cols:
            raise DomainError(
                f"A {rows}x{cols} grid needs {rows * cols} blocks, got "
                f"{blocks.shape[0]}."
            )
        self.blocks = blocks
        self.grid_dims = (rows, cols)

    @property
    def block_size(self):
        return self.blocks.shape[1]

    def __len__(self):
        return self.blocks.shape[0]


def _check_block_size(width, height, block_size):
    if block_size < 1 or width % block_size or height % block_size:
        raise DomainError(
            f"Block size {block_size} must divide the image dimensions "
            f"{width}x{height}."
        )


def plaintext_digest(image):
    """
    Return the sum of all pixel values modulo 2**32.

    Examples
    --------
    >>> plaintext_digest(ImageBuffer(np.array([[3, 4]], dtype=np.uint8)))
    7

    """
    return int(image.pixels.sum(dtype=np.uint64)) % _DIGEST_MODULUS


def derive_initial_conditions(key, digest):
    """
    Couple the key's initial conditions to a plaintext digest.

    Parameters
    ----------
    key : MasterKey
        The secret key.
    digest : int
        32-bit plaintext digest.

    Returns
    -------
    MasterKey
        A copy of ``key`` with ``x' = 0.01 + 0.98 * frac(x + d)`` and
        ``y', v', w'`` formed likewise with offsets ``frac(k * d)`` for
        ``k`` = phi, 2*phi mod 1 and 3*phi mod 1, where ``d = digest / 2**32``
        and phi = 0.6180339887. The map constants and ``n_iter`` are kept.

    """
    shift = digest * _DIGEST_SCALE
    multipliers = (_PHI, _frac(2 * _PHI), _frac(3 * _PHI))
    y_offset, v_offset, w_offset = (_frac(k * shift) for k in multipliers)
    return replace(
        key,
        x=_fold(key.x + shift),
        y=_fold(key.y + y_offset),
        v=_fold(key.v + v_offset),
        w=_fold(key.w + w_offset),
    )


def build_keystream(key, digest, n_pixels, n_blocks):
    """
    Derive the block permutation and the XOR mask for one image.

    A logistic stream X and a Duffing stream Y, each of length
    ``n_blocks + n_pixels``, are generated from the digest-coupled initial
    conditions and combined by ordering X by the rank of Y. The first
    ``n_blocks`` combined samples give the block permutation, the remaining
    ``n_pixels`` give the mask.

    Parameters
    ----------
    key : MasterKey
        The secret key.
    digest : int
        32-bit plaintext digest.
    n_pixels : int
        Number of mask bytes (pixel values) required.
    n_blocks : int
        Number of blocks to permute.

    Returns
    -------
    tuple
        A :class:`~chaocrypt.chaos_core.Permutation` and a ``uint8`` mask.

    """
    if n_pixels < 1 or n_blocks < 1:
        raise DomainError(
            f"Keystream needs at least one pixel and one block, got "
            f"{n_pixels} and {n_blocks}."
        )
    effective = derive_initial_conditions(key, digest)
    length = n_blocks + n_pixels

    # The logistic orbit runs through its burn-in, absorbs y', then emits X.
    head = generate_sequence(
        LogisticParams(mu=effective.mu, x0=effective.x),
        1,
        burn_in=effective.n_iter - 1,
    )
    x_start = _fold(head.samples[-1] + effective.y)
    x_stream = generate_sequence(
        LogisticParams(mu=effective.mu, x0=x_start), length, burn_in=0
    )
    y_stream = generate_sequence(
        DuffingParams(x0=effective.v, y0=effective.w, a=effective.a, b=effective.b),
        length,
        burn_in=effective.n_iter,
    )
    combined = combine_streams(x_stream, y_stream).samples
    permutation = floats_to_permutation(combined[:n_blocks])
    mask = floats_to_bytes(combined[n_blocks:])
    logger.debug(
        "Built keystream: digest=%d, blocks=%d, mask bytes=%d.",
        digest,
        n_blocks,
        n_pixels,
    )
    return permutation, mask


def partition_blocks(image, m):
    """
    Cut an image into ``m x m`` tiles in row-major block order.

    Each tile carries every channel of its spatial window. ``m`` must divide
    both image dimensions; there is no padding.

    """
    _check_block_size(image.width, image.height, m)
    rows, cols = image.height // m, image.width // m
    channels = image.channels
    blocks = (
        image.pixels.reshape(rows, m, cols, m, channels)
        .swapaxes(1, 2)
        .reshape(rows * cols, m, m, channels)
    )
    return BlockGrid(blocks, (rows, cols))


def apply_block_permutation(grid, perm):
    """Return a grid whose block ``j`` is input block ``perm.mapping[j]``."""
    if len(perm) != len(grid):
        raise DomainError(
            f"Permutation of length {len(perm)} cannot reorder {len(grid)} blocks."
        )
    return BlockGrid(grid.blocks[perm.mapping], grid.grid_dims)


def invert_permutation(perm):
    """
    Return the permutation undoing ``perm``.

    Examples
    --------
    >>> invert_permutation(Permutation([1, 2, 0])).mapping
    array([2, 0, 1])

    """
    inverse = np.empty_like(perm.mapping)
    inverse[perm.mapping] = np.arange(len(perm))
    return Permutation(inverse)


def merge_blocks(grid):
    """Reassemble a grid of tiles into an image; the inverse of partitioning."""
    rows, cols = grid.grid_dims
    m = grid.block_size
    channels = grid.blocks.shape[3]
    pixels = (
        grid.blocks.reshape(rows, cols, m, m, channels)
        .swapaxes(1, 2)
        .reshape(rows * m, cols * m, channels)
    )
    return ImageBuffer(pixels)


def xor_diffuse(pixels, mask):
    """
    XOR two equal-length byte sequences elementwise.

    Examples
    --------
    >>> xor_diffuse(np.array([0xAA], dtype=np.uint8), np.array([0xFF], dtype=np.uint8))
    array([85], dtype=uint8)

    """
    pixels = np.asarray(pixels, dtype=np.uint8)
    mask = np.asarray(mask, dtype=np.uint8)
    if pixels.shape != mask.shape:
        raise DomainError(
            f"Pixels and mask differ in length: {pixels.size} and {mask.size}."
        )
    return np.bitwise_xor(pixels, mask)


def encrypt(image, key, m=DEFAULT_BLOCK_SIZE, timings=None):
    """
    Encrypt an image.

    The blocks of the image are shuffled by a chaotic permutation, merged
    back into one image and XORed with a chaotic mask.

    Parameters
    ----------
    image : ImageBuffer
        The plaintext image.
    key : MasterKey
        The secret key.
    m : int, optional
        Block edge in pixels; must divide both image dimensions.
        Defaults to 32.
    timings : dict, optional
        If given, receives the wall time in seconds of the ``digest``,
        ``keystream``, ``permutation`` and ``diffusion`` phases.

    Returns
    -------
    CipherEnvelope
        The ciphertext and the header needed to decrypt it.

    """
    _check_block_size(image.width, image.height, m)
    clock = time.perf_counter
    n_blocks = (image.width // m) * (image.height // m)

    marks = [clock()]
    digest = plaintext_digest(image)
    marks.append(clock())
    perm, mask = build_keystream(key, digest, image.size, n_blocks)
    marks.append(clock())
    shuffled = merge_blocks(apply_block_permutation(partition_blocks(image, m), perm))
    marks.append(clock())
    ciphertext = xor_diffuse(shuffled.pixels.reshape(-1), mask)
    marks.append(clock())

    if timings is not None:
        for phase, begin, end in zip(ENCRYPT_PHASES, marks, marks[1:]):
            timings[phase] = end - begin

    return CipherEnvelope(
        width=image.width,
        height=image.height,
        channels=image.channels,
        block_size=m,
        digest=digest,
        ciphertext=ciphertext.tobytes(),
    )


def decrypt(envelope, key):
    """
    Recover the plaintext image from an envelope.

    The mask is removed first, then the blocks are returned to their
    original places.

    Parameters
    ----------
    envelope : CipherEnvelope
        The encrypted image.
    key : MasterKey
        The secret key used for encryption.

    Returns
    -------
    ImageBuffer
        The recovered image.

    """
    m = envelope.block_size
    n_blocks = (envelope.width // m) * (envelope.height // m)
    n_pixels = len(envelope.ciphertext)
    perm, mask = build_keystream(key, envelope.digest, n_pixels, n_blocks)
    ciphertext = np.frombuffer(envelope.ciphertext, dtype=np.uint8)
    shuffled = ImageBuffer(
        xor_diffuse(ciphertext, mask).reshape(
            envelope.height, envelope.width, envelope.channels
        )
    )
    grid = apply_block_permutation(
        partition_blocks(shuffled, m), invert_permutation(perm)
    )
    return merge_blocks(grid)
