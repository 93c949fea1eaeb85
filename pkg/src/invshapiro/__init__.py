"""Explicit inverse Shapiro map on inhomogeneous cocycles, and nonsplit
2-group covers whose involutions all lie in the kernel."""

__version__ = "0.1.0"
