"""Exception hierarchy.  Every error carries a stable machine-readable ``code``."""


class TmfresError(Exception):
    code = "ERROR"

    def __init__(self, message="", **info):
        super().__init__(message)
        self.info = info

    def __str__(self):
        return f"{self.code}: {super().__str__()}"


class ParseError(TmfresError):
    code = "PARSE_ERROR"

    def __init__(self, message, position=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message, position=position, line=line)
        self.position = position
        self.line = line


class RingMismatch(TmfresError):
    code = "RING_MISMATCH"


class YInYFreeRing(TmfresError):
    code = "Y_IN_Y_FREE_RING"


class NegativeMultiplicity(TmfresError):
    code = "NEGATIVE_MULTIPLICITY"


class UnsupportedKind(TmfresError):
    code = "UNSUPPORTED_KIND"


class WindowTooLarge(TmfresError):
    code = "WINDOW_TOO_LARGE"


class WindowTooSmall(TmfresError):
    code = "WINDOW_TOO_SMALL"


class DegreeMismatch(TmfresError):
    code = "DEGREE_MISMATCH"


class BudgetExceeded(TmfresError):
    code = "BUDGET_EXCEEDED"

    def __init__(self, message="", partial=None, **info):
        super().__init__(message, **info)
        self.partial = partial


class NotExterior(TmfresError):
    code = "NOT_EXTERIOR"
