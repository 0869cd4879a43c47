"""Exact computation in graph coalgebras, free Lie (co)algebras, and the
bar/cobar-style functors between commutative algebras and Lie coalgebras,
over the rationals.  See README.md for an overview and the CLI entry point."""

__version__ = "0.1.0"
