class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured size or operation budget."""


class NotDivisibleError(ArithmeticError):
    """An exact division had a nonzero remainder."""


class ReconstructionError(RuntimeError):
    """No rational function of the allowed degrees matches the series prefix."""


class IntegralityError(ArithmeticError):
    """A quantity that must be a rational integer was not one."""
