"""Milnor numbers of one-dimensional foliations along positive-dimensional singular components."""

__version__ = "0.1.0"
