"""Runtime knobs read from the environment."""

import os

from .errors import BudgetExceeded

DEFAULT_BUDGET = 2**22


def point_budget() -> int:
    """Largest point count any enumeration may produce (``TILEFORGE_BUDGET``)."""
    raw = os.environ.get("TILEFORGE_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"TILEFORGE_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("TILEFORGE_BUDGET must be positive")
    return value


def check_budget(requested: int, budget: int | None, what: str) -> None:
    budget = point_budget() if budget is None else budget
    if requested > budget:
        raise BudgetExceeded(f"{what} needs {requested} points, budget is {budget}", requested, budget)
