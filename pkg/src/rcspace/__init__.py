"""Exact rational geometry for rc-space separation in the Niemytzki and Sorgenfrey planes."""

__version__ = "0.1.0"
