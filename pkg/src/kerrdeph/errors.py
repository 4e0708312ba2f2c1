"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the mathematical domain of the formula."""


class DimensionError(ValueError):
    """A requested dimension violates the finite lambda<0 bound or a size cap."""


class InvalidStateError(ValueError):
    """A density matrix fails its Hermiticity / trace / positivity invariants."""


class TruncationError(RuntimeError):
    """A Fock-space truncation cannot meet the requested tail tolerance."""


class ConvergenceError(RuntimeError):
    """An environment-dimension doubling protocol hit its cap before converging."""


class DivergenceError(ValueError):
    """A series evaluation was requested outside its disc of convergence."""


class SingularityError(ValueError):
    """A decomposition parameter sits at or beyond a tan singularity."""
