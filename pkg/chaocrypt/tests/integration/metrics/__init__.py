"""Integration tests for :mod:`chaocrypt.metrics`."""
