"""Unit tests for :mod:`chaocrypt.cli`."""
