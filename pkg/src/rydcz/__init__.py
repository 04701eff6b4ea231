"""Simulation and pulse-optimization toolkit for fast Rydberg CZ gates with an ancillary drive."""

__version__ = "0.1.0"


class IntegrationError(RuntimeError):
    """Raised when a time-evolution run drifts outside its accuracy contract."""
