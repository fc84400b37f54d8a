"""Numerical ranges, Kippenhahn curves and convex supports of Hermitian tuples."""
