"""Nielsen and Andrews-Curtis equivalence of generating tuples."""

__version__ = "0.1.0"
