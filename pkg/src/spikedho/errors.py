"""Exception types shared across the package."""


class DomainDiverges(ValueError):
    """The integral defining the matrix element does not converge (alpha >= 2 gamma)."""


class InvalidIndex(ValueError):
    """A basis index is negative or not an integer."""


class IndexOutOfTable(KeyError):
    """Requested an explicit-table entry beyond the tabulated 4 x 4 block."""


class NoConvergence(RuntimeError):
    """The Jacobi eigensolver did not reach its tolerance."""
