"""Integration tests for :mod:`chaocrypt.cipher_engine`."""
