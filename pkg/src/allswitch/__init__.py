"""Strategy improvement for parity games, circuit-iteration gadget games and
their verification harness."""

__version__ = "0.1.0"
