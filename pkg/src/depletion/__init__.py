"""Density depletion in free-fermion chains with inhomogeneous hoppings."""

__version__ = "0.1.0"
