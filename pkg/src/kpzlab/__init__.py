"""Numerical laboratory for the stationary ASEP and stochastic six-vertex model.

Exact finite-size identity checks (q-moments, Fredholm determinants), Monte
Carlo simulators for KPZ-scaling experiments, and the Baik-Rains distribution.
"""

__version__ = "0.1.0"
