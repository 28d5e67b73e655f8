"""Numerical solvers: potential, limit profiles, waves, linearization, rescaling, lattice."""
