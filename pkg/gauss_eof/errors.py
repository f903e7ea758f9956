"""Ошибки gauss-eof.

Каждый класс знает свой код выхода CLI и HTTP-статус, так что точки входа
не держат собственных таблиц соответствия.
"""


class GaussEofError(Exception):
    exit_code = 1
    http_status = 422


class InvalidInput(GaussEofError, ValueError):
    """Вход не описывает допустимое состояние или параметры."""


class InvalidParams(InvalidInput):
    pass


class ParametrizationMismatch(InvalidInput):
    pass


class NotPhysical(InvalidInput):
    pass


class NotEntangled(InvalidInput):
    pass


class NotApplicable(InvalidInput):
    pass


class NumericalError(GaussEofError, ArithmeticError):
    exit_code = 2
    http_status = 500


class NumericalDomain(NumericalError):
    pass


class SingularTransform(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class NoFeasiblePoint(NumericalError):
    pass


class ExhaustedAttempts(NumericalError):
    pass


class DivisionByZero(NumericalError):
    pass


class OutputError(GaussEofError, OSError):
    exit_code = 3
    http_status = 500
