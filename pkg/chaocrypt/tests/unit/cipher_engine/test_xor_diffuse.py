"""Unit tests for :func:`chaocrypt.cipher_engine.xor_diffuse`."""

import numpy as np
import pytest

from chaocrypt.cipher_engine import xor_diffuse
from chaocrypt.exceptions import DomainError


def test_xor_diffuse():
    """Basic test for :func:`~chaocrypt.cipher_engine.xor_diffuse`."""
    result = xor_diffuse(np.array([0xAA], np.uint8), np.array([0xFF], np.uint8))
    assert np.array_equal(result, [0x55])


def test_xor_diffuse_zero_mask():
    """Test that an all-zero mask is the identity."""
    pixels = np.arange(256, dtype=np.uint8)
    assert np.array_equal(xor_diffuse(pixels, np.zeros(256, np.uint8)), pixels)


def test_xor_diffuse_involution():
    """Test that diffusing twice with one mask restores the input."""
    rng = np.random.default_rng(11)
    pixels = rng.integers(0, 256, 1000, dtype=np.uint8)
    mask = rng.integers(0, 256, 1000, dtype=np.uint8)
    assert np.array_equal(xor_diffuse(xor_diffuse(pixels, mask), mask), pixels)


def test_xor_diffuse_length_mismatch():
    """Test that sequences of different length are rejected."""
    with pytest.raises(DomainError):
        _ = xor_diffuse(np.zeros(3, np.uint8), np.zeros(4, np.uint8))
