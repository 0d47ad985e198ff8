"""Unit tests for :mod:`chaocrypt.config`."""
