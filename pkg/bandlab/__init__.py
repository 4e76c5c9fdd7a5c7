"""Combinatorial tools for the Lamplighter group: word problems, van Kampen diagrams, a-bands."""

__version__ = "0.1.0"
