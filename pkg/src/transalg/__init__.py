"""Logic of many-sorted transition algebras over finite models."""

__version__ = "0.1.0"
