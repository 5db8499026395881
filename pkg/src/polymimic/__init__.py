"""Polynomial automorphisms over finite fields and the permutations they induce."""

__version__ = "0.1.0"
