"""Chaotic block-permutation and XOR image cipher."""

from .cipher_engine import *


__version__ = "0.1.dev0"
