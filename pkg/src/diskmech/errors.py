"""Package-wide exception types."""


class NonConvergenceError(RuntimeError):
    """An iterative solver exhausted its budget without converging.

    Raised by the thermal fixed-point solver when no self-consistent shift
    can be located; signals pathological parameters rather than a spectrum
    that merely looks odd.
    """
