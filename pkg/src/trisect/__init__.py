"""Exact combinatorial calculus for trisection and Heegaard diagrams."""

__version__ = "0.1.0"
