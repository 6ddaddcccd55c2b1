"""Shared exception types."""


class SizeError(Exception):
    """A requested enumeration or series computation exceeds a hard guard."""


class CharacteristicError(Exception):
    """Operation requires odd characteristic."""


class WrongDegreeError(Exception):
    """Point does not have the algebraic degree the operation expects."""


class UnstableCountError(Exception):
    """Growing the search bound changed an enumerated count."""
