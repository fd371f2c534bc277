"""Executable checks of uniform reductions between combinatorial problems."""

__version__ = "0.1.0"
