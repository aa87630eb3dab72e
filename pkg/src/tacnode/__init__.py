"""Discrete tacnode kernel, its limits and the arctic geometry of hexagons with cuts."""

__version__ = "0.1.0"
