"""Exception hierarchy."""


class PhlError(Exception):
    """Base class for all errors raised by phl."""


class ParseError(PhlError, ValueError):
    def __init__(self, message: str, text: str = "", column: int | None = None):
        self.text = text
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}" + (f" in {text!r}" if text else ""))


class ShapeMismatch(PhlError, ValueError):
    pass


class OrderExhausted(PhlError, ValueError):
    """A derivative was requested from a jet that no longer carries that information."""


class TorsionError(PhlError, ValueError):
    pass


class PreconditionError(PhlError, ValueError):
    pass


class CatalogCheckError(PhlError, AssertionError):
    """A catalog entry failed one of its declared properties."""
