"""Exact verification of branched pull-back foliations on projective space."""

__version__ = "0.1.0"
