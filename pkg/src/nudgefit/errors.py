"""Exception types shared across the package."""


class DimensionError(ValueError):
    """State, parameter, or tangent length does not match the model layout."""


class ConfigError(ValueError):
    """Invalid experiment or integrator configuration."""


class DivergenceError(RuntimeError):
    """A trajectory went non-finite during integration.

    ``subsystem`` names which piece blew up: "truth", "nudged" or
    "sensitivity". ``runlog`` carries the partial run log when the failure
    happened inside an experiment loop.
    """

    def __init__(self, subsystem, message=None, runlog=None):
        self.subsystem = subsystem
        self.runlog = runlog
        super().__init__(message or f"non-finite values in the {subsystem} subsystem")


class SingularUpdateError(RuntimeError):
    """Gauss-Newton solve hit a singular matrix; use damping > 0."""
