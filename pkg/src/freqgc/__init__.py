"""Frequency-domain Granger causality testing."""

__version__ = "0.1.0"
