"""Extract Method refactoring recommendation from mined Java history."""

__version__ = "0.1.0"
