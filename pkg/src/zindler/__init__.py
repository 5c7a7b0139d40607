"""Zindler-carousel laboratory for floating bodies of perimetral density 1/6."""

from zindler.scalar_kernel import H0, H_MAX, AngleState, SymmetricCoords, hamiltonian

__version__ = "0.1.0"

__all__ = ["H0", "H_MAX", "AngleState", "SymmetricCoords", "hamiltonian", "__version__"]
