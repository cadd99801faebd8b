"""Exception types shared across the package."""


class VarclustError(Exception):
    """Base class for all varclust errors."""


class DataError(VarclustError):
    """Invalid input data or configuration (bad CSV, bad column, bad K...)."""


class RareCategoryError(VarclustError):
    """A variable cannot be standardized on the current rows.

    Raised when a qualitative level has zero observed count or a
    quantitative variable has zero variance.  On full datasets this is a
    data defect; on bootstrap resamples it is an expected failure mode
    (a rare category can vanish from the resample).
    """

    def __init__(self, variable: str, detail: str = ""):
        self.variable = variable
        self.detail = detail
        msg = f"variable {variable!r} cannot be standardized"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NumericalError(VarclustError):
    """A quantity is undefined for the given data (0/0-type degeneracy)."""
