"""Spectral localization toolkit and damped compressible Euler simulator."""

__version__ = "0.1.0"
