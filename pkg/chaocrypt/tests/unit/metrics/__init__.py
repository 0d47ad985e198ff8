"""Unit tests for :mod:`chaocrypt.metrics`."""
