"""Unit tests for :mod:`chaocrypt.robustness`."""
