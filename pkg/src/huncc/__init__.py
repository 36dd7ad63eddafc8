"""Hybrid universal network-coding cryptosystem (HUNCC) toolkit."""
__version__ = "0.1.0"
