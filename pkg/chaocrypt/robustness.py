"""Provides noise and data-loss attacks on ciphertext and their evaluation."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import enum
import logging
import math

import numpy as np

from .cipher_engine import ImageBuffer, decrypt, encrypt
from .config import thread_count
from .exceptions import DomainError
from .metrics import channel_names, psnr


__all__ = [
    "AttackKind",
    "AttackSpec",
    "RobustnessReport",
    "RobustnessRow",
    "apply_attack",
    "crop_loss",
    "crop_side",
    "robustness_report",
    "speckle_multipliers",
    "speckle_noise",
]

logger = logging.getLogger(__name__)


class AttackKind(enum.Enum):
    """The channel attacks that can be simulated."""

    SPECKLE = "speckle"
    CROP = "crop"


@dataclass(frozen=True)
class AttackSpec:
    """
    One attack on a ciphertext.

    Use :meth:`speckle` or :meth:`crop` rather than the constructor.

    """

    kind: AttackKind
    parameter: float
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.parameter):
            raise DomainError(f"Attack parameter must be finite, got {self.parameter}.")
        if self.kind is AttackKind.SPECKLE and self.parameter < 0:
            raise DomainError(
                f"Speckle variance must be non-negative, got {self.parameter}."
            )
        if self.kind is AttackKind.CROP and not 0.0 <= self.parameter <= 1.0:
            raise DomainError(
                f"Crop fraction must lie in [0, 1], got {self.parameter}."
            )

    @classmethod
    def speckle(cls, alpha, seed=0):
        """Multiplicative uniform noise of variance ``alpha``."""
        return cls(AttackKind.SPECKLE, float(alpha), seed)

    @classmethod
    def crop(cls, fraction):
        """Zeroing of a top-left square covering ``fraction`` of the area."""
        return cls(AttackKind.CROP, float(fraction))


def speckle_multipliers(shape, alpha, seed):
    """
    Draw zero-mean uniform noise of variance ``alpha``.

    The draws are uniform on [-sqrt(3 alpha), sqrt(3 alpha)] and depend only
    on ``shape``, ``alpha`` and ``seed``.

    """
    if alpha < 0:
        raise DomainError(f"Speckle variance must be non-negative, got {alpha}.")
    bound = math.sqrt(3.0 * alpha)
    return np.random.default_rng(seed).uniform(-bound, bound, size=shape)


def speckle_noise(image, alpha, seed=0):
    """
    Apply multiplicative speckle noise.

    Every value ``v`` becomes ``clamp(round(v + n * v), 0, 255)`` with ``n``
    drawn by :func:`speckle_multipliers`.

    Parameters
    ----------
    image : ImageBuffer
        The image to corrupt.
    alpha : float
        Noise variance, non-negative.
    seed : int, optional
        Seed of the noise generator.

    Returns
    -------
    ImageBuffer

    """
    values = image.pixels.astype(np.float64)
    noise = speckle_multipliers(values.shape, alpha, seed)
    noisy = np.clip(np.rint(values + noise * values), 0, 255)
    return ImageBuffer(noisy.astype(np.uint8))


def crop_side(width, height, fraction):
    """
    Return the edge of the square removed by a crop of ``fraction``.

    Examples
    --------
    >>> crop_side(512, 512, 0.5)
    362

    """
    return int(round(min(width, height) * math.sqrt(fraction)))


def crop_loss(image, fraction):
    """
    Zero a square anchored at the top-left corner, in every channel.

    The square has edge ``round(min(width, height) * sqrt(fraction))``.

    """
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"Crop fraction must lie in [0, 1], got {fraction}.")
    side = crop_side(image.width, image.height, fraction)
    pixels = image.pixels.copy()
    pixels[:side, :side, :] = 0
    return ImageBuffer(pixels)


def apply_attack(image, spec):
    """Apply the attack described by an :class:`AttackSpec` to an image."""
    if spec.kind is AttackKind.SPECKLE:
        return speckle_noise(image, spec.parameter, spec.seed)
    return crop_loss(image, spec.parameter)


@dataclass(frozen=True)
class RobustnessRow:
    """The effect of one attack on one channel of the recovered image."""

    attack: AttackKind
    parameter: float
    channel: str
    psnr_db: float
    incorrect_fraction: float


class RobustnessReport:
    """Rows of attack results, in attack order then channel order."""

    #: Columns of the CSV serialization.
    HEADER = ("attack", "parameter", "channel", "psnr_db", "incorrect_fraction")

    def __init__(self, rows=()):
        self.rows = list(rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def select(self, kind=None, channel=None):
        """Return the rows matching an attack kind and/or channel."""
        return [
            row
            for row in self.rows
            if (kind is None or row.attack is AttackKind(kind))
            and (channel is None or row.channel == channel)
        ]

    def to_csv(self):
        """Return the report as CSV text with a header line."""
        lines = [",".join(self.HEADER)]
        for row in self.rows:
            lines.append(
                f"{row.attack.value},{row.parameter:g},{row.channel},"
                f"{row.psnr_db:.6f},{row.incorrect_fraction:.6f}"
            )
        return "\n".join(lines) + "\n"


def _evaluate(plain, envelope, key, spec):
    attacked = apply_attack(envelope.as_image(), spec)
    recovered = decrypt(replace(envelope, ciphertext=attacked.tobytes()), key)
    incorrect = np.count_nonzero(recovered.pixels != plain.pixels, axis=(0, 1))
    fractions = incorrect / (plain.width * plain.height)
    logger.debug(
        "Attack %s(%g): %d incorrect bytes.",
        spec.kind.value,
        spec.parameter,
        int(incorrect.sum()),
    )
    return [
        RobustnessRow(spec.kind, spec.parameter, name, float(ratio), float(fraction))
        for name, ratio, fraction in zip(
            channel_names(plain.channels), psnr(plain, recovered), fractions
        )
    ]


def robustness_report(plain, key, m, attacks):
    """
    Measure how well decryption survives attacks on the ciphertext.

    The plaintext is encrypted once; each attack corrupts a copy of the
    ciphertext viewed as an image, which is then decrypted and compared with
    the plaintext.

    Parameters
    ----------
    plain : ImageBuffer
        The plaintext image.
    key : MasterKey
        The encryption key.
    m : int
        Block size.
    attacks : iterable of AttackSpec
        The attacks to evaluate.

    Returns
    -------
    RobustnessReport

    """
    attacks = list(attacks)
    if not attacks:
        return RobustnessReport()
    envelope = encrypt(plain, key, m)
    with ThreadPoolExecutor(max_workers=thread_count()) as executor:
        results = executor.map(
            lambda spec: _evaluate(plain, envelope, key, spec), attacks
        )
        rows = [row for result in results for row in result]
    return RobustnessReport(rows)
