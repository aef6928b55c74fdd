"""Enriched Morse complexes over GF(2) and spectral sequences of filtered complexes."""

from .gf2 import BitMatrix, BitVector, InconsistentSystem, kernel_basis, rank, relative_rank, solve

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVector",
    "InconsistentSystem",
    "kernel_basis",
    "rank",
    "relative_rank",
    "solve",
]
