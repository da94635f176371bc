"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Instance size exceeds a configured cap."""


class InfeasibleError(ValueError):
    """More vehicles than subframes: no orthogonal assignment exists."""


class ShapeError(ValueError):
    """Matrix dimensions disagree with the grid or cluster."""


class ParseError(ValueError):
    """A CSV record failed to parse; carries the 1-based cell location."""

    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


class ConstraintViolation(ValueError):
    """An assignment breaks vehicle uniqueness or subframe orthogonality."""


class ConfigError(ValueError):
    """Experiment config failed validation; lists the offending keys."""

    def __init__(self, keys):
        self.keys = list(keys)
        super().__init__("invalid config: " + "; ".join(self.keys))
