"""Exception types raised by thermogeom."""


class DimensionError(ValueError):
    """Array lengths or shapes do not agree."""


class DegenerateTrajectoryError(ValueError):
    """The energy variance vanishes, so the thermal trajectory is a point."""


class SchemaError(ValueError):
    """A spectrum file does not match the expected document layout."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class InfeasibleConstraintsError(ValueError):
    """An equality-constrained estimator problem has no exact solution."""

    def __init__(self, message, residual=None, rank=None):
        self.residual = residual
        self.rank = rank
        super().__init__(message)


class NumericalInconsistencyError(ArithmeticError):
    """Two analytic routes to the same quantity disagree beyond tolerance."""
