"""Computations around marked Schottky space: enumeration of extended
Schottky signatures, the free-group involutions they induce, and real
structures with their fixed points."""

__version__ = "0.1.0"
