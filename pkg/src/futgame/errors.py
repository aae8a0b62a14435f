class InfeasibleError(RuntimeError):
    """No control sequence satisfies the budget and non-negativity constraints."""


class CapExceeded(RuntimeError):
    """Brute-force enumeration would exceed the configured size cap."""
