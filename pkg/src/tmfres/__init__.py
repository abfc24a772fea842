"""Algebraic tmf resolution: generating-function calculus and A(2) verification tools."""
