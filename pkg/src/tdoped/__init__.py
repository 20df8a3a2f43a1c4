"""Simulation and single-copy learning of t-doped stabilizer states."""

__version__ = "0.1.0"
