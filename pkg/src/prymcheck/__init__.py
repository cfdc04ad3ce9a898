"""Exact verification of Dehn twist, double cover and Prym computations."""

__version__ = "0.1.0"
