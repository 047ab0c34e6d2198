"""Incidence systems, projective planes and the codes they span."""

__version__ = "0.1.0"
