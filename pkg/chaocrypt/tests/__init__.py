"""Common testing infrastructure."""

import pathlib

import numpy as np

from chaocrypt.cipher_engine import ImageBuffer, MasterKey


# Base directory of the test results.
_RESULT_PATH = pathlib.Path(__file__).parent.resolve() / "results"


def get_result_path(relative_path, unit=True):
    """
    Form the absolute path to the results test file.

    Parameters
    ----------
    relative_path : str, path, iterable str/path
        The relative path to the target test file.
    unit : bool, optional
        Specify whether the `relative_path` is for a unit test.
        Default is True.

    Returns
    -------
    Path
        The absolute result path.

    """
    if isinstance(relative_path, str):
        relative_path = pathlib.Path(relative_path)

    if not isinstance(relative_path, pathlib.PurePath):
        relative_path = pathlib.Path(*relative_path)

    if unit:
        relative_path = pathlib.Path("unit") / relative_path

    result = _RESULT_PATH / relative_path

    return result.resolve(strict=True)


def make_key(**kwargs):
    """
    Return a fixed key for tests.

    Parameters
    ----------
    **kwargs
        Overrides of any :class:`~chaocrypt.cipher_engine.MasterKey` field.

    Returns
    -------
    MasterKey

    """
    params = dict(x=0.3141592653, y=0.2718281828, v=0.5772156649, w=0.6931471805)
    params.update(kwargs)
    return MasterKey(**params)


def make_random_image(width, height, channels=3, seed=0):
    """Return an image of independent uniform random pixel values."""
    rng = np.random.default_rng(seed)
    return ImageBuffer(
        rng.integers(0, 256, size=(height, width, channels), dtype=np.uint8)
    )


def make_smooth_image(width, height, channels=3):
    """
    Return a smoothly varying image with strongly correlated neighbours.

    Each channel is a differently phased blend of a diagonal ramp and a slow
    two-dimensional wave, standing in for a natural photograph.

    """
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    planes = []
    for channel in range(channels):
        ramp = (rows + cols) / (width + height - 2 or 1)
        wave = np.sin(cols / 23.0 + channel) * np.cos(rows / 31.0 - channel)
        planes.append(40.0 + 140.0 * ramp + 35.0 * wave)
    return ImageBuffer(np.rint(np.stack(planes, axis=-1)).astype(np.uint8))
