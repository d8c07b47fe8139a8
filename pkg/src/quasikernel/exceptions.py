"""Shared exception types."""


class ParseError(ValueError):
    """Malformed digraph text/JSON or a malformed family/alpha expression."""


class BudgetExceededError(RuntimeError):
    """Input is too large for an exact desk-scale computation."""


class PostconditionViolationError(RuntimeError):
    """A verified construction produced output that fails its own guarantee.

    This is raised instead of returning silently: it signals either an
    implementation bug or, for the conjecture-backed pipelines, a potential
    counterexample that deserves a report rather than a wrong answer.
    """


class OracleContractError(RuntimeError):
    """An injected solver broke the contract it was declared with."""
