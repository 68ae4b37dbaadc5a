"""Exception types shared by all modules."""


class ParameterError(ValueError):
    """A window, index, threshold or other argument is out of its valid range."""


class DataError(ValueError):
    """Input data is malformed (non-finite values, wrong shape)."""


class DegenerateInputError(ValueError):
    """A measure is undefined for the given input, e.g. a zero vector."""
