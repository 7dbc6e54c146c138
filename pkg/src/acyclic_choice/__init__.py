"""Acyclic edge list-coloring of sparse graphs, with certificates and verifiers."""

__version__ = "0.1.0"
