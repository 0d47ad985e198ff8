"""Unit tests for :mod:`chaocrypt.chaos_core`."""
