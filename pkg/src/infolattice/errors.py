"""Shared exception types."""


class CapacityError(RuntimeError):
    """Raised when an enumeration or closure would exceed its configured cap.

    Caps turn combinatorial blowups into explicit failures; nothing is ever
    silently truncated.
    """
