"""Taguchi robust parameter design with grey relational analysis."""

__version__ = "0.1.0"
