"""Isomorphism classes of the algebras A(T) attached to strictly lower triangular matrices."""

__version__ = "0.1.0"
