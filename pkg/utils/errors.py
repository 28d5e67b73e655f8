"""Exception hierarchy for the FPU wave toolkit.

Numerical failures map to CLI exit code 1, configuration and usage problems to
exit code 2.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT

Classes:
    FpuWaveError: Base class for every error raised by the toolkit.
    NumericalFailure: A computation could not produce a trustworthy result.
    ConfigurationError: Invalid settings, missing inputs or mixed sweep grids.
    ArtifactWriteError: An output file could not be written.
"""


class FpuWaveError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class NumericalFailure(FpuWaveError):
    """A numerical stage failed (exit code 1)."""

    exit_code = 1


class PotentialDomainError(NumericalFailure, ValueError):
    """Potential evaluated at or beyond the singularity r = 1, or with a bad order."""


class IntegrationFailure(NumericalFailure):
    """Fixed-step integration drifted beyond its energy tolerance."""


class ProfileRangeError(NumericalFailure):
    """A profile was evaluated outside its tabulated and extendable range."""


class ConvergenceFailure(NumericalFailure):
    """An iteration exhausted its budget or lost a monitored invariant."""


class UnimodalityLost(ConvergenceFailure):
    """An iterate stopped being even, nonnegative and unimodal."""


class TruncationError(NumericalFailure):
    """Profiles did not decay inside the computational domain."""


class SpectralDomainError(NumericalFailure, ValueError):
    """Spectral quantity requested outside its domain (c <= 1, a >= a_c)."""


class BarrierViolation(NumericalFailure):
    """A lattice distance reached the singularity r = 1."""

    def __init__(self, step_index: int, max_distance: float):
        self.step_index = step_index
        self.max_distance = max_distance
        super().__init__(
            f"Singularity barrier violated at step {step_index}: max r = {max_distance:.17g}"
        )


class StepSizeRejected(NumericalFailure, ValueError):
    """Time step above the stability bound of the leapfrog scheme."""


class ConfigurationError(FpuWaveError):
    """Invalid configuration or missing input (exit code 2)."""

    exit_code = 2


class SweepStageFailure(NumericalFailure):
    """Stages failed for some deltas of a sweep; the partial report is still written."""

    def __init__(self, deltas, report_path):
        self.deltas = list(deltas)
        self.report_path = report_path
        super().__init__(f"Stages failed for delta in {self.deltas}; partial report at {report_path}")


class ArtifactWriteError(FpuWaveError):
    """An output file could not be written."""
