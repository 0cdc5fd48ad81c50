"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the split between
domain-precondition failures and resource guards.
"""


class DomainError(ValueError):
    """A precondition on an operation's inputs was violated."""


class ResourceCapExceeded(RuntimeError):
    """An exact computation hit its configured resource cap.

    Raised instead of silently falling back to a cheaper approximation.
    """


class StaleStatsError(RuntimeError):
    """Cached triangle statistics disagree with a full recount."""
