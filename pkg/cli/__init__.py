"""Command-line interface for the FPU wave toolkit."""
