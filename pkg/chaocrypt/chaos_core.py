"""Provides logistic and Duffing orbits and their conversion to keystream material."""

from dataclasses import dataclass, field
import enum
import logging
import math

import numpy as np

from .exceptions import DivergenceError, DomainError


__all__ = [
    "DEFAULT_A",
    "DEFAULT_B",
    "DEFAULT_BURN_IN",
    "DEFAULT_MU",
    "ChaosSequence",
    "DuffingParams",
    "LogisticParams",
    "MapKind",
    "Permutation",
    "combine_streams",
    "duffing_next",
    "floats_to_bytes",
    "floats_to_permutation",
    "generate_sequence",
    "logistic_next",
]

logger = logging.getLogger(__name__)

#: Lower and upper bound of the chaotic regime of the logistic map.
MU_RANGE = (3.57, 4.0)

#: Default logistic control parameter.
DEFAULT_MU = 3.99

#: Default Duffing constants.
DEFAULT_A = 2.75
DEFAULT_B = 0.2

#: Default number of discarded transient iterations.
DEFAULT_BURN_IN = 1000

# Duffing y-components are folded into [-_DUFFING_BOUND, _DUFFING_BOUND).
_DUFFING_BOUND = 4.0

# Scale applied to fractional parts before reduction modulo 256.
_QUANTUM = 1e10


def _check_mu(mu):
    if not MU_RANGE[0] <= mu <= MU_RANGE[1]:
        raise DomainError(
            f"Logistic control parameter must lie in [{MU_RANGE[0]}, "
            f"{MU_RANGE[1]}], got {mu!r}."
        )


def _check_unit_state(x):
    if not 0.0 < x < 1.0:
        raise DomainError(f"Logistic state must lie in (0, 1), got {x!r}.")


class MapKind(enum.Enum):
    """The chaotic map a sequence was drawn from."""

    LOGISTIC = "logistic"
    DUFFING = "duffing"


@dataclass(frozen=True)
class LogisticParams:
    """
    Seed of a logistic orbit.

    Parameters
    ----------
    mu : float
        Control parameter, within the chaotic regime [3.57, 4.0].
    x0 : float
        Initial state, within the open interval (0, 1).

    """

    mu: float
    x0: float

    def __post_init__(self):
        _check_mu(self.mu)
        _check_unit_state(self.x0)


@dataclass(frozen=True)
class DuffingParams:
    """
    Seed of a Duffing (Holmes) orbit.

    Parameters
    ----------
    x0, y0 : float
        Initial point in the plane. The origin is a fixed point and is
        rejected.
    a, b : float, optional
        Map constants, defaulting to the chaotic setting 2.75 and 0.2.

    """

    x0: float
    y0: float
    a: float = DEFAULT_A
    b: float = DEFAULT_B

    def __post_init__(self):
        values = (self.x0, self.y0, self.a, self.b)
        if not all(math.isfinite(value) for value in values):
            raise DomainError(f"Duffing parameters must be finite, got {values}.")
        if self.x0 == 0.0 and self.y0 == 0.0:
            raise DomainError("Duffing initial point (0, 0) is a fixed point.")


@dataclass(frozen=True, eq=False)
class ChaosSequence:
    """An ordered run of chaotic samples and the map they came from."""

    samples: np.ndarray
    source: MapKind

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise DomainError("Chaotic samples must form a 1D sequence.")
        if not np.all(np.isfinite(samples)):
            raise DivergenceError("Chaotic samples must be finite.")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    def __eq__(self, other):
        if not isinstance(other, ChaosSequence):
            return NotImplemented
        return self.source is other.source and np.array_equal(
            self.samples, other.samples
        )


@dataclass(frozen=True, eq=False)
class Permutation:
    """
    A bijection on ``{0, ..., L-1}``.

    ``mapping[j]`` names the source index that lands at position ``j``.
    """

    mapping: np.ndarray = field(repr=False)

    def __post_init__(self):
        mapping = np.asarray(self.mapping, dtype=np.int64)
        if mapping.ndim != 1:
            raise DomainError("A permutation mapping must be 1D.")
        if not np.array_equal(np.sort(mapping), np.arange(len(mapping))):
            raise DomainError("A permutation mapping must be a bijection.")
        object.__setattr__(self, "mapping", mapping)

    def __len__(self):
        return len(self.mapping)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)


def logistic_next(x, mu):
    """
    Advance the logistic map by one step.

    Parameters
    ----------
    x : float
        Current state in (0, 1).
    mu : float
        Control parameter in [3.57, 4.0].

    Returns
    -------
    float
        ``mu * x * (1 - x)``, which lies in (0, 1].

    Examples
    --------
    >>> logistic_next(0.5, 4.0)
    1.0

    """
    _check_unit_state(x)
    _check_mu(mu)
    return mu * x * (1.0 - x)


def duffing_next(x, y, a=DEFAULT_A, b=DEFAULT_B):
    """
    Advance the standard two-component Duffing map by one step.

    Parameters
    ----------
    x, y : float
        Current point in the plane.
    a, b : float, optional
        Map constants.

    Returns
    -------
    tuple of float
        ``(y, -b*x + a*y - y**3)``.

    Examples
    --------
    >>> duffing_next(1.0, 1.0)
    (1.0, 1.55)

    """
    y_new = -b * x + a * y - y * y * y
    if not math.isfinite(y_new):
        raise DivergenceError(
            f"Duffing step from ({x!r}, {y!r}) with a={a!r}, b={b!r} diverged."
        )
    return y, y_new


def _logistic_orbit(params, count, burn_in):
    mu = params.mu
    x = params.x0
    for _ in range(burn_in):
        x = mu * x * (1.0 - x)
    # Reaching 1.0 collapses the orbit onto 0, so checking the last stepped
    # state and the stepped samples covers every intermediate state.
    _check_unit_state(x)
    samples = np.array(
        [x := mu * x * (1.0 - x) for _ in range(count)], dtype=np.float64
    )
    if count > 1 and not np.all((samples[:-1] > 0.0) & (samples[:-1] < 1.0)):
        raise DomainError("Logistic orbit collapsed onto the boundary of (0, 1).")
    return samples


def _duffing_unfolded(params, total):
    # Left to right: -b * x_old + a * y_old - y_old**3, leaving x = y_old.
    nb, a = -params.b, params.a
    x, y = params.x0, params.y0
    return np.array(
        [y := nb * x + a * (x := y) - x * x * x for _ in range(total)],
        dtype=np.float64,
    )


def _duffing_folded(params, total):
    a, b = params.a, params.b
    x, y = params.x0, params.y0
    low = -_DUFFING_BOUND
    span = 2 * _DUFFING_BOUND
    samples = []
    append = samples.append
    for _ in range(total):
        x, y = y, -b * x + a * y - y * y * y
        if not low <= y < _DUFFING_BOUND:
            y = (y - low) % span + low
        append(y)
    return np.array(samples, dtype=np.float64)


def _duffing_orbit(params, count, burn_in):
    total = burn_in + count
    samples = _duffing_unfolded(params, total)
    # The fold never fires on an orbit that stays within the bound.
    inside = (samples >= -_DUFFING_BOUND) & (samples < _DUFFING_BOUND)
    if not inside.all():
        logger.debug("Duffing orbit from %s left the bound; folding.", params)
        samples = _duffing_folded(params, total)
    if not np.all(np.isfinite(samples)):
        raise DivergenceError(f"Duffing orbit from {params} diverged.")
    return samples[burn_in:]


def generate_sequence(params, count, burn_in=DEFAULT_BURN_IN):
    """
    Iterate a chaotic map and collect its samples.

    The map is first iterated ``burn_in`` times with the outputs discarded,
    then ``count`` further iterates are collected. For the Duffing map the
    y-component is the emitted sample; y-components leaving [-4, 4) are
    folded back into that interval so that escaping orbits stay bounded.

    Parameters
    ----------
    params : LogisticParams or DuffingParams
        The map and its seed.
    count : int
        Number of samples to return.
    burn_in : int, optional
        Number of transient iterations to discard. Defaults to 1000.

    Returns
    -------
    ChaosSequence
        Exactly ``count`` samples.

    Examples
    --------
    >>> generate_sequence(LogisticParams(mu=4.0, x0=0.3), 2, burn_in=0).samples
    array([0.84  , 0.5376])

    """
    if count < 0 or burn_in < 0:
        raise DomainError(
            f"Sample and burn-in counts must be non-negative, got {count} "
            f"and {burn_in}."
        )
    if isinstance(params, LogisticParams):
        source = MapKind.LOGISTIC
        orbit = _logistic_orbit
    elif isinstance(params, DuffingParams):
        source = MapKind.DUFFING
        orbit = _duffing_orbit
    else:
        raise TypeError(f"Unsupported map parameters {type(params).__name__}.")

    if count == 0:
        return ChaosSequence(np.empty(0, dtype=np.float64), source)

    logger.debug(
        "Generating %d %s samples after %d burn-in iterations.",
        count,
        source.value,
        burn_in,
    )
    return ChaosSequence(orbit(params, count, burn_in), source)


def combine_streams(x_stream, y_stream):
    """
    Reorder one stream by the ascending rank order of another.

    Parameters
    ----------
    x_stream : ChaosSequence
        The stream supplying the values.
    y_stream : ChaosSequence
        The stream supplying the order. Must have the length of ``x_stream``.

    Returns
    -------
    ChaosSequence
        ``x_stream[argsort(y_stream)]``, labelled with the source of
        ``x_stream``.

    """
    if len(x_stream) != len(y_stream):
        raise DomainError(
            f"Streams must have equal length, got {len(x_stream)} and "
            f"{len(y_stream)}."
        )
    order = np.argsort(y_stream.samples, kind="stable")
    return ChaosSequence(x_stream.samples[order], x_stream.source)


def floats_to_permutation(samples):
    """
    Return the stable argsort permutation of a run of reals.

    ``mapping[j]`` is the index of the j-th smallest sample, ties broken by
    original index.

    Examples
    --------
    >>> floats_to_permutation([0.9, 0.1, 0.5]).mapping
    array([1, 2, 0])

    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise DomainError("Cannot derive a permutation from no samples.")
    return Permutation(np.argsort(samples, kind="stable"))


def floats_to_bytes(samples):
    """
    Quantize reals to bytes.

    Each byte is ``floor(frac(|s|) * 1e10) mod 256``.

    Parameters
    ----------
    samples : array_like
        Finite reals.

    Returns
    -------
    numpy.ndarray
        A ``uint8`` array with one byte per sample.

    Examples
    --------
    >>> floats_to_bytes([0.0, 0.5, 0.123456789])
    array([  0,   0, 210], dtype=uint8)

    """
    samples = np.asarray(samples, dtype=np.float64)
    if not np.all(np.isfinite(samples)):
        raise DivergenceError("Cannot quantize non-finite samples.")
    fraction, _ = np.modf(np.abs(samples))
    scaled = np.floor(fraction * _QUANTUM).astype(np.int64)
    return (scaled % 256).astype(np.uint8)
