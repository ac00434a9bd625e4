"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class CutoffGuardError(DomainError):
    """A Fock-space computation would exceed the configured size limit."""
