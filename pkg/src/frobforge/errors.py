import os


class BudgetExceeded(RuntimeError):
    """A computation would exceed the configured desk-scale budget."""


def max_unknowns() -> int:
    return int(os.environ.get("FROBFORGE_MAX_UNKNOWNS", "12000"))
