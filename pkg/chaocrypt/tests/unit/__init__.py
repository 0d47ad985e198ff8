"""Unit tests for chaocrypt."""
