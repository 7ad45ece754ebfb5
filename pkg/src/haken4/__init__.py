"""Dehn-twist words, surface-bundle labels and verifiable 4-manifold assembly plans."""

__version__ = "0.1.0"
