"""Integration tests for chaocrypt."""
