"""Unit tests for :class:`chaocrypt.chaos_core.DuffingParams`."""

import pytest

from chaocrypt.chaos_core import DuffingParams
from chaocrypt.exceptions import DomainError


def test_DuffingParams_defaults():
    """Basic test for :class:`~chaocrypt.chaos_core.DuffingParams`."""
    params = DuffingParams(x0=0.1, y0=0.2)
    assert (params.a, params.b) == (2.75, 0.2)


def test_DuffingParams_fixed_point():
    """Test that the origin is rejected."""
    with pytest.raises(DomainError):
        _ = DuffingParams(x0=0.0, y0=0.0)
    # Only the point itself is excluded.
    _ = DuffingParams(x0=0.0, y0=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(x0=float("nan"), y0=0.1),
        dict(x0=0.1, y0=float("inf")),
        dict(x0=0.1, y0=0.1, a=float("nan")),
    ],
)
def test_DuffingParams_non_finite(kwargs):
    """Test that non-finite parameters are rejected."""
    with pytest.raises(DomainError):
        _ = DuffingParams(**kwargs)
