"""Finite-scale equivariant classifying categories, crossed homomorphisms and skew group rings."""
