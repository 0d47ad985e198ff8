"""Unit tests for :mod:`chaocrypt.envelope_io`."""
