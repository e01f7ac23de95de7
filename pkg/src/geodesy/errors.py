class GeodesyError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GeodesyError, ValueError):
    pass


class NotSolvable(GeodesyError):
    pass


class NumericalFailure(GeodesyError):
    pass


class NotAnIdeal(GeodesyError):
    pass


class NotADerivation(GeodesyError):
    pass


class NonzeroTrace(GeodesyError):
    pass


class DefiniteForm(GeodesyError):
    pass


class WrongShape(GeodesyError):
    pass


class NotCommuting(GeodesyError):
    pass


class NotRDiagonal(GeodesyError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class HypothesisFailed(GeodesyError):
    def __init__(self, hypothesis: str, witness=None):
        super().__init__(f"hypothesis failed: {hypothesis}")
        self.hypothesis = hypothesis
        self.witness = witness


class IsomorphicToAn(GeodesyError):
    pass


class NotCodim1Abelian(GeodesyError):
    pass


class NotHeisenbergIdeal(GeodesyError):
    pass


class TrivialCenter(GeodesyError):
    pass


class UnknownName(GeodesyError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown name"


class ParamOutOfRange(GeodesyError, ValueError):
    pass


class DocumentError(GeodesyError, ValueError):
    """Malformed algebra document; carries a location when known."""

    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + loc)
        self.msg = msg
        self.line = line
        self.column = column
