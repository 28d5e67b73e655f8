"""Workflows package for orchestrating delta sweeps.

This package runs the per-delta analysis stages with timing and error
capture and assembles the sweep artifacts.
"""

from workflows.sweep_workflow import (
    DeltaResult,
    DeltaSweepWorkflow,
    StageResult,
)

__all__ = [
    'DeltaSweepWorkflow',
    'StageResult',
    'DeltaResult'
]
