"""Exception hierarchy. Every error carries a stable ``code`` for JSON output."""


class ToriError(Exception):
    code = "tori_error"


class InvalidInput(ToriError, ValueError):
    code = "invalid_input"


class DegenerateError(InvalidInput):
    code = "degenerate"


class FieldMismatch(InvalidInput):
    code = "field_mismatch"


class ResourceLimit(ToriError):
    code = "resource_limit"


class ConvergenceFailure(ToriError, ArithmeticError):
    code = "no_convergence"
