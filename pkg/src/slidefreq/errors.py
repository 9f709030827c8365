"""Exception types shared across the package."""


class ConstraintError(ValueError):
    """Invalid frequency bounds (ordering, range, or length)."""


class WrongLength(ValueError):
    """A block was expected to have length exactly ell."""


class InvalidWord(ValueError):
    """A word contains a symbol outside 1..r."""


class EmptyConstraint(ValueError):
    """The constraint admits no block at all."""


class UnsupportedLength(ValueError):
    pass


class DeadEnd(RuntimeError):
    """Sampling could not extend the current word."""


class InvalidMatrix(ValueError):
    """Non-square, mis-shaped, or non-finite matrix input."""


class AlphabetMismatch(ValueError):
    """Number of matrices differs from the alphabet size of the word source."""
