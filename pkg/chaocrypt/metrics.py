"""Provides the statistical measures used to assess an image cipher."""

from concurrent.futures import ThreadPoolExecutor
import enum
import logging
import math

import numpy as np
from scipy import stats

from .config import thread_count
from .exceptions import DomainError


__all__ = [
    "CHI_SQUARE_CRITICAL_001",
    "ChannelView",
    "Direction",
    "MetricsReport",
    "adjacent_correlation",
    "analyze_image",
    "channel_names",
    "channel_views",
    "chi_square_pvalue",
    "chi_square_uniformity",
    "differential_report",
    "histogram",
    "mse",
    "npcr",
    "psnr",
    "shannon_entropy",
    "uaci",
]

logger = logging.getLogger(__name__)

#: Upper 1% point of the chi-square distribution with 255 degrees of freedom.
CHI_SQUARE_CRITICAL_001 = 310.46

_LEVELS = 256
_PEAK = 255


class Direction(enum.Enum):
    """Neighbour direction for adjacent-pixel correlation."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


class ChannelView:
    """A single colour channel of an image as a ``(height, width)`` array."""

    def __init__(self, values):
        values = np.asarray(values)
        if values.ndim != 2:
            raise DomainError(f"A channel must be 2D, got shape {values.shape}.")
        self.values = values

    @classmethod
    def from_image(cls, image, channel):
        """Return channel ``channel`` of an :class:`ImageBuffer`."""
        return cls(image.pixels[:, :, channel])

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def size(self):
        return self.values.size


def channel_names(channels):
    """Return report labels for an image with ``channels`` channels."""
    if channels == 3:
        return ("red", "green", "blue")
    if channels == 1:
        return ("gray",)
    return tuple(f"channel{index}" for index in range(channels))


def channel_views(image):
    """Return a :class:`ChannelView` for every channel of an image."""
    return [ChannelView.from_image(image, index) for index in range(image.channels)]


def _check_same_dims(c1, c2):
    if c1.values.shape != c2.values.shape:
        raise DomainError(
            f"Channels differ in dimensions: {c1.values.shape} and "
            f"{c2.values.shape}."
        )
    if c1.size == 0:
        raise DomainError("Channels must not be empty.")


def _check_same_shape(i1, i2):
    if i1.shape != i2.shape:
        raise DomainError(f"Images differ in shape: {i1.shape} and {i2.shape}.")
    if i1.size == 0:
        raise DomainError("Images must not be empty.")


def npcr(c1, c2):
    """
    Return the number of pixel change rate between two channels, in percent.

    This is the share of positions holding different values.

    """
    _check_same_dims(c1, c2)
    changed = np.count_nonzero(c1.values != c2.values)
    return 100.0 * changed / c1.size


def uaci(c1, c2):
    """
    Return the unified averaged changed intensity between two channels.

    The mean absolute difference is normalised by 255 and given in percent.

    """
    _check_same_dims(c1, c2)
    difference = np.abs(c1.values.astype(np.int64) - c2.values.astype(np.int64))
    return 100.0 * int(difference.sum()) / (_PEAK * c1.size)


def histogram(c):
    """Return the 256 value counts of a channel."""
    return np.bincount(c.values.ravel(), minlength=_LEVELS)


def shannon_entropy(c):
    """
    Return the Shannon entropy of a channel in bits per symbol.

    Values absent from the channel contribute nothing.

    """
    if c.size == 0:
        raise DomainError("Cannot take the entropy of an empty channel.")
    return float(stats.entropy(histogram(c), base=2))


_PAIR_SLICES = {
    Direction.HORIZONTAL: (
        (slice(None), slice(None, -1)),
        (slice(None), slice(1, None)),
    ),
    Direction.VERTICAL: (
        (slice(None, -1), slice(None)),
        (slice(1, None), slice(None)),
    ),
    Direction.DIAGONAL: (
        (slice(None, -1), slice(None, -1)),
        (slice(1, None), slice(1, None)),
    ),
}


def adjacent_correlation(c, direction):
    """
    Return the Pearson correlation of adjacent pixel pairs.

    Every adjacent pair in the given direction takes part.

    Parameters
    ----------
    c : ChannelView
        A channel of at least 2 x 2 pixels.
    direction : Direction or str
        ``horizontal`` pairs (i, j) with (i, j+1), ``vertical`` pairs (i, j)
        with (i+1, j) and ``diagonal`` pairs (i, j) with (i+1, j+1).

    Returns
    -------
    float
        The correlation coefficient, within [-1, 1].

    """
    direction = Direction(direction)
    if c.height < 2 or c.width < 2:
        raise DomainError(
            f"Correlation needs a channel of at least 2x2, got {c.width}x{c.height}."
        )
    first, second = _PAIR_SLICES[direction]
    left = c.values[first].ravel().astype(np.float64)
    right = c.values[second].ravel().astype(np.float64)
    if np.ptp(left) == 0 or np.ptp(right) == 0:
        raise DomainError(
            f"Correlation is undefined for a channel without {direction.value} "
            f"variation."
        )
    r, _ = stats.pearsonr(left, right)
    return float(r)


def chi_square_uniformity(hist):
    """
    Return the chi-square statistic of a histogram against a flat one.

    Examples
    --------
    >>> chi_square_uniformity(np.full(256, 10))
    0.0

    """
    hist = np.asarray(hist)
    if hist.sum() <= 0:
        raise DomainError("Cannot test the uniformity of an empty histogram.")
    statistic, _ = stats.chisquare(hist)
    return float(statistic)


def chi_square_pvalue(statistic, levels=_LEVELS):
    """Return the upper-tail probability of a uniformity statistic."""
    return float(stats.chi2.sf(statistic, levels - 1))


def _squared_error_sums(i1, i2):
    difference = i1.pixels.astype(np.int64) - i2.pixels.astype(np.int64)
    return (difference * difference).sum(axis=(0, 1))


def mse(i1, i2):
    """
    Return the mean squared error of each channel.

    Parameters
    ----------
    i1, i2 : ImageBuffer
        Images of equal shape.

    Returns
    -------
    numpy.ndarray
        One float per channel.

    """
    _check_same_shape(i1, i2)
    return _squared_error_sums(i1, i2) / (i1.width * i1.height)


def psnr(i1, i2):
    """
    Return the peak signal to noise ratio of each channel in decibels.

    Channels with no error report ``inf``.

    """
    errors = mse(i1, i2)
    result = np.full(errors.shape, math.inf)
    nonzero = errors > 0
    result[nonzero] = 10.0 * np.log10(_PEAK ** 2 / errors[nonzero])
    return result


def _format(value):
    if value is None:
        return "undefined"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.6f}"


class MetricsReport:
    """
    Per-channel results of an image analysis.

    Each metric attribute maps a channel name to its value, or is empty when
    the metric was not computed. ``correlation`` maps a channel name to a
    direction-to-coefficient mapping; a coefficient is None where the channel
    lacks the variation it needs.

    """

    #: Scalar metrics in report order.
    SCALARS = (
        "npcr",
        "uaci",
        "entropy",
        "chi_square",
        "chi_square_pvalue",
        "mse",
        "psnr",
    )

    def __init__(self, width, height, channels):
        self.width = width
        self.height = height
        self.channels = channel_names(channels)
        self.npcr = {}
        self.uaci = {}
        self.entropy = {}
        self.chi_square = {}
        self.chi_square_pvalue = {}
        self.mse = {}
        self.psnr = {}
        self.correlation = {}
        self.histogram = {}

    def to_text(self):
        """Return the report as ``name=value`` lines."""
        lines = [
            f"width={self.width}",
            f"height={self.height}",
            f"channels={len(self.channels)}",
        ]
        for name in self.channels:
            for metric in self.SCALARS:
                values = getattr(self, metric)
                if name in values:
                    lines.append(f"{name}.{metric}={_format(values[name])}")
            for direction, r in self.correlation.get(name, {}).items():
                lines.append(f"{name}.correlation_{direction.value}={_format(r)}")
        return "\n".join(lines) + "\n"

    def histogram_csv(self, channel):
        """Return the histogram of a channel as 256 ``value,count`` lines."""
        counts = self.histogram[channel]
        return "".join(f"{value},{count}\n" for value, count in enumerate(counts))


def _channel_statistics(view):
    counts = histogram(view)
    statistic = chi_square_uniformity(counts)
    correlations = {}
    for direction in Direction:
        try:
            correlations[direction] = adjacent_correlation(view, direction)
        except DomainError as error:
            logger.debug("Correlation skipped: %s", error)
            correlations[direction] = None
    return counts, shannon_entropy(view), statistic, correlations


def analyze_image(image, against=None):
    """
    Collect the single-image statistics of every channel.

    Parameters
    ----------
    image : ImageBuffer
        The image to analyse.
    against : ImageBuffer, optional
        A reference image; when given, MSE and PSNR against it are added.

    Returns
    -------
    MetricsReport

    """
    if image.size == 0:
        raise DomainError("Cannot analyse an empty image.")
    report = MetricsReport(image.width, image.height, image.channels)
    with ThreadPoolExecutor(max_workers=thread_count()) as executor:
        results = list(executor.map(_channel_statistics, channel_views(image)))
    for name, (counts, entropy, statistic, correlations) in zip(
        report.channels, results
    ):
        report.histogram[name] = counts
        report.entropy[name] = entropy
        report.chi_square[name] = statistic
        report.chi_square_pvalue[name] = chi_square_pvalue(statistic)
        report.correlation[name] = correlations
    if against is not None:
        for name, error, ratio in zip(
            report.channels, mse(image, against), psnr(image, against)
        ):
            report.mse[name] = float(error)
            report.psnr[name] = float(ratio)
    return report


def differential_report(i1, i2):
    """Return the per-channel NPCR and UACI between two images."""
    _check_same_shape(i1, i2)
    report = MetricsReport(i1.width, i1.height, i1.channels)
    for name, c1, c2 in zip(report.channels, channel_views(i1), channel_views(i2)):
        report.npcr[name] = npcr(c1, c2)
        report.uaci[name] = uaci(c1, c2)
    return report
