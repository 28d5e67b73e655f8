"""Test suite for the FPU wave toolkit.

This package contains tests for the potential, the limit profiles, the wave
solver, the linearization, the rescaled analysis, the lattice integrator,
the sweep workflow and the command-line interface.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""
