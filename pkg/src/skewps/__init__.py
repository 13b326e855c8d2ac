"""Truncated skew power series, crossed products and valuation extensions over finite fields."""

__version__ = "0.1.0"
