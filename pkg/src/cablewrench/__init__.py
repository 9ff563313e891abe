"""Kinetostatic modelling and cable-arrangement search for a CDPR carrying a spherical wrist."""

__version__ = "0.1.0"
