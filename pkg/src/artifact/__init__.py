"""Desk-scale numerics for oscillatory integrals, symbol calculus,
semiclassical quantization, wavefront detection, and bicharacteristic flow.

Everything is built on three conventions fixed in :mod:`artifact.core`:
the unitary scaled Fourier transform with kernel e^{-i x.xi/h}, centered
power-of-two grids, and truncated Taylor jets for exact derivatives.
"""

__version__ = "0.1.0"

from . import core, oscillatory, stationary, symbols

__all__ = ["core", "oscillatory", "stationary", "symbols", "__version__"]
