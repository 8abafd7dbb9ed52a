"""Exact-arithmetic engine for the hbar-difference system of the curve
x(z) = z + 1/z, y(z) = ln z, and its verification suites."""

__version__ = "0.1.0"
