class InputError(ValueError):
    """Malformed instance, unknown vertex id, or an impossible request."""


class ConfigurationError(ValueError):
    """A solver or mid-point mode was combined with an instance it cannot handle."""


class OracleLimitError(InputError):
    """The exact enumeration was asked to handle more candidates than its limit."""

    def __init__(self, what, count, limit):
        super().__init__(
            f"{what} count {count} exceeds the enumeration limit {limit}; "
            f"raise the limit explicitly if you really want this"
        )
        self.count = count
        self.limit = limit
