"""Fidelity auditing for random-circuit-sampling experiments."""

__version__ = "0.1.0"
