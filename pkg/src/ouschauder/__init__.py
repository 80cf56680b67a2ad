"""Mehler semigroup, resolvent and H-Schauder estimate checks for Gaussian measures."""
__version__ = "0.1.0"
