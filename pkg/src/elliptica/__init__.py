"""Numerical and exact tools for the elliptic algebras Q_{n,k}(E, tau)."""
__version__ = "0.1.0"
