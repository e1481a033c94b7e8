"""Finite-model workbench for fundamental logic and its modal extension."""

__version__ = "0.1.0"
