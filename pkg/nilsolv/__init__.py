"""nilsolv - free nilpotent Lie algebras, nilsoliton metrics and Einstein nilradical certificates."""

__version__ = "0.1.0"
