"""Equitable 2-partitions of halved hypercubes.

Library and CLI for enumerating candidate quotient matrices, building
partitions from codes and smaller partitions, verifying equitability by
direct counting, and deciding existence by exact backtracking search.
"""

__version__ = "0.1.0"
