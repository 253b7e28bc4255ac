"""Gauge distances, ridges and gradient-constrained variational solvers in the plane."""
