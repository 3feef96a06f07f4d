"""Orders of fundamental units of real quadratic fields modulo odd prime conductors."""

__version__ = "0.1.0"
