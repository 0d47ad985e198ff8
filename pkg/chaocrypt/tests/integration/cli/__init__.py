"""Integration tests for :mod:`chaocrypt.cli`."""
