"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument breaks a documented precondition (shape, range, index)."""


class DataFormatError(ValueError):
    """An input file or stream is malformed; message names the offender."""
