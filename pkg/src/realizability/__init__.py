"""Finite classical realizability structures and their checkers."""

__version__ = "0.1.0"
