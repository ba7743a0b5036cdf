"""Solvability of the norm equation N(u) = zeta_3 in pure cubic extensions of Q(zeta_3)."""

__version__ = "0.1.0"
