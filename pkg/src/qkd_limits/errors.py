class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""
