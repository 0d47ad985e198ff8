"""Integration tests for :mod:`chaocrypt.robustness`."""
