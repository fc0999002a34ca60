"""Error types shared across modules.

Invalid arguments raise the builtin ValueError. Numerical routines that
fail to converge raise NumericFailure instead of returning garbage.
"""


class NumericFailure(RuntimeError):
    """An iterative numerical routine did not converge to tolerance."""
