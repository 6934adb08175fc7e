"""Exact verification tools for quotients of abelian varieties fibred in projective spaces."""
__version__ = "0.1.0"
