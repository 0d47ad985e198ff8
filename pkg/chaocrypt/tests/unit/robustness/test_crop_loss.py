"""Unit tests for :func:`chaocrypt.robustness.crop_loss`."""

import numpy as np
import pytest

from chaocrypt.exceptions import DomainError
from chaocrypt.robustness import AttackSpec, apply_attack, crop_loss, crop_side
from chaocrypt.tests import make_random_image


def test_crop_loss():
    """Basic test for :func:`~chaocrypt.robustness.crop_loss`."""
    image = make_random_image(64, 32)
    result = crop_loss(image, 0.25)
    side = crop_side(64, 32, 0.25)
    assert side == 16
    assert not result.pixels[:side, :side, :].any()
    # Nothing outside the square changes.
    outside = np.ones(image.shape[:2], dtype=bool)
    outside[:side, :side] = False
    assert np.array_equal(result.pixels[outside], image.pixels[outside])


def test_crop_loss_extremes():
    """Test the empty and the full crop."""
    image = make_random_image(16, 16)
    assert crop_loss(image, 0.0) == image
    assert not crop_loss(image, 1.0).pixels.any()


def test_crop_loss_does_not_modify_input():
    """Test that the input image is left untouched."""
    image = make_random_image(16, 16)
    before = image.copy()
    _ = crop_loss(image, 0.5)
    assert image == before


def test_crop_loss_invalid():
    """Test that fractions outside [0, 1] are rejected."""
    with pytest.raises(DomainError):
        _ = crop_loss(make_random_image(4, 4), 1.1)


def test_apply_attack():
    """Basic test for :func:`~chaocrypt.robustness.apply_attack`."""
    image = make_random_image(16, 16)
    assert apply_attack(image, AttackSpec.crop(0.5)) == crop_loss(image, 0.5)
    speckled = apply_attack(image, AttackSpec.speckle(0.1, seed=2))
    assert speckled.shape == image.shape
