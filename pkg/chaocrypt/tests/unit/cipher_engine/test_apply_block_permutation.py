"""Unit tests for :func:`chaocrypt.cipher_engine.apply_block_permutation`."""

import numpy as np
import pytest

from chaocrypt.chaos_core import Permutation
from chaocrypt.cipher_engine import (
    apply_block_permutation,
    invert_permutation,
    partition_blocks,
)
from chaocrypt.exceptions import DomainError
from chaocrypt.tests import make_random_image


def _grid():
    return partition_blocks(make_random_image(4, 4, channels=3), 2)


def test_apply_block_permutation():
    """Basic test for :func:`~chaocrypt.cipher_engine.apply_block_permutation`."""
    grid = _grid()

    result = apply_block_permutation(grid, Permutation(np.arange(4)))
    assert np.array_equal(result.blocks, grid.blocks)

    result = apply_block_permutation(grid, Permutation([3, 2, 1, 0]))
    assert np.array_equal(result.blocks, grid.blocks[::-1])
    assert result.grid_dims == grid.grid_dims


def test_apply_block_permutation_inverse():
    """Test that applying a permutation then its inverse restores the grid."""
    grid = partition_blocks(make_random_image(32, 32, channels=3), 4)
    perm = Permutation(np.random.default_rng(5).permutation(len(grid)))
    shuffled = apply_block_permutation(grid, perm)
    restored = apply_block_permutation(shuffled, invert_permutation(perm))
    assert np.array_equal(restored.blocks, grid.blocks)


def test_apply_block_permutation_length_mismatch():
    """Test that a permutation must match the block count."""
    with pytest.raises(DomainError):
        _ = apply_block_permutation(_grid(), Permutation([1, 0]))


def test_invert_permutation():
    """Basic test for :func:`~chaocrypt.cipher_engine.invert_permutation`."""
    perm = Permutation([2, 0, 3, 1])
    inverse = invert_permutation(perm)
    assert np.array_equal(perm.mapping[inverse.mapping], np.arange(4))
    assert np.array_equal(inverse.mapping[perm.mapping], np.arange(4))
