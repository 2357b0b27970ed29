"""Exception types shared across the package."""


class SizeLimitError(Exception):
    """An input exceeds a declared feasibility limit (CLI exit code 3)."""
