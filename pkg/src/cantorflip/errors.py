"""Shared exception types."""


class BudgetError(RuntimeError):
    """A requested computation exceeds its documented size budget.

    Raised instead of attempting work that would exhaust memory or overflow
    64-bit counters; callers should lower the depth or switch to a sampling
    mode. The command line tool maps this to exit code 3.
    """
