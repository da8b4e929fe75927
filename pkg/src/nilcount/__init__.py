"""Brute-force oracles and exact formulas for nilpotent counting problems."""

__version__ = "0.1.0"
