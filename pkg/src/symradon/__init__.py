"""Integral geometry on Euclidean, hyperbolic and product symmetric spaces."""
