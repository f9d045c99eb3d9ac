"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class FormatError(ValueError):
    """A key, cipher or image file could not be parsed."""


class DivergenceError(RuntimeError):
    """The recovery solver produced a non-finite objective."""
