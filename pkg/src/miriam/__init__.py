"""Chat-based mission assistant for simulated autonomous underwater vehicles."""

__version__ = "0.1.0"
