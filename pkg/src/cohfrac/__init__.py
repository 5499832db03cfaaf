"""Coherence fraction, robustness of coherence and Schur-channel tools."""

__version__ = "0.1.0"
