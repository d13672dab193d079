"""Exact counting, generating-series and shuffle-algebra toolkit for preprojective algebras of quivers."""

__version__ = "0.1.0"
