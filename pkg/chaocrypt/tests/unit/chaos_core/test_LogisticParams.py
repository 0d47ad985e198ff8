"""Unit tests for :class:`chaocrypt.chaos_core.LogisticParams`."""

import dataclasses

import pytest

from chaocrypt.chaos_core import LogisticParams
from chaocrypt.exceptions import DomainError


def test_LogisticParams_init():
    """Basic test for :class:`~chaocrypt.chaos_core.LogisticParams`."""
    params = LogisticParams(mu=3.99, x0=0.25)
    assert params.mu == 3.99
    assert params.x0 == 0.25
    with pytest.raises(dataclasses.FrozenInstanceError):
        params.mu = 4.0


@pytest.mark.parametrize(
    "mu, x0", [(3.99, 0.0), (3.99, 1.0), (3.0, 0.3), (4.5, 0.3)]
)
def test_LogisticParams_invalid(mu, x0):
    """Test that parameters outside the chaotic domain are rejected."""
    with pytest.raises(DomainError):
        _ = LogisticParams(mu=mu, x0=x0)
