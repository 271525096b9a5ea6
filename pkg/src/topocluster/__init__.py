"""Simulation, decoding and exact verification for 3-D topological cluster states."""

__version__ = "0.1.0"
